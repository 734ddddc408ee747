//! Contraction certificates: τ, the δ bound, and the α sweep.
//!
//! δ < 1 certifies convergence of the accelerated modulus sweep. Over
//! `Ω = αD` the bound is minimized at `α = 1/γ` where `δ = τ`, and any
//! scalar-identity Ω does no better than τ on a non-constant diagonal.
//! The bound is only sufficient: in the scenario benchmarks smaller α
//! converges faster than the certificate optimum.
//!
//! ```bash
//! cargo run --example certificate
//! ```

use amgs::contact::synthetic::random_spd_lcp;
use amgs::contact::{alpha_sweep_certificates, certificate};
use amgs::lcp::{OmegaChoice, SolverConfig};
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let prob = random_spd_lcp(12, &mut rng);
    let cfg = SolverConfig::default(); // gamma = 2, omega = D/gamma
    let cert = certificate(prob.a(), &cfg).unwrap();
    println!("certificate at omega = D/gamma:");
    print!("{}", cert.report());

    let with_identity = certificate(
        prob.a(),
        &SolverConfig::default().with_omega(OmegaChoice::ScalarAverage),
    )
    .unwrap();
    println!(
        "\nscalar-identity omega (diagonal average): delta = {:.6} >= tau",
        with_identity.delta
    );

    println!("\nalpha sweep (gamma = 2):");
    let alphas: Vec<f64> = (1..=12).map(|k| 0.1 * k as f64).collect();
    for (alpha, delta) in alpha_sweep_certificates(prob.a(), cfg.gamma, &alphas).unwrap() {
        let marker = if (alpha - 0.5).abs() < 1e-12 {
            "  <- 1/gamma: the bound's minimum, delta = tau"
        } else {
            ""
        };
        println!("  alpha = {alpha:.1}: delta = {delta:.6}{marker}");
    }
}
