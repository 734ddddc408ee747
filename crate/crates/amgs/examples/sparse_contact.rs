//! The factored sweep versus the densified matrix on a pile of bodies.
//!
//! Both paths generate the same iterates; the factored one never forms
//! `A = J M⁻¹ Jᵀ` and each sweep costs `O(nnz(J))`.
//!
//! ```bash
//! cargo run --release --example sparse_contact
//! ```

use std::time::Instant;

use amgs::contact::synthetic::random_contact_problem;
use amgs::contact::{ContactSweep, SweepKind};
use amgs::lcp::{DenseAmgs, SolverConfig};
use amgs::linalg::diff_inf;

fn main() {
    let problem = random_contact_problem(120, 300, 42);
    let m = problem.constraints();
    println!(
        "{} bodies, {m} constraints, nnz(J) = {}, nnz(M̂) = {}",
        problem.dofs() / 3,
        problem.j.nnz(),
        problem.mhat.nnz()
    );

    let dense_problem = problem.densify().unwrap();
    let cfg = SolverConfig::default();
    let lambda0 = vec![0.0; m];
    let mut factored =
        ContactSweep::new(&problem, &lambda0, &cfg, None, SweepKind::ModulusAccelerated).unwrap();
    let mut dense = DenseAmgs::new(&dense_problem, &lambda0, &cfg).unwrap();

    let mut factored_time = 0.0;
    let mut dense_time = 0.0;
    let mut worst_gap = 0.0f64;
    let sweeps = 100;
    for _ in 0..sweeps {
        let t = Instant::now();
        factored.sweep();
        factored_time += t.elapsed().as_secs_f64();
        let t = Instant::now();
        dense.sweep();
        dense_time += t.elapsed().as_secs_f64();
        worst_gap = worst_gap.max(diff_inf(factored.lambda(), dense.lambda()));
    }
    println!("max iterate gap over {sweeps} sweeps: {worst_gap:.2e}");
    println!(
        "per-sweep time: factored {:.2}us vs dense {:.2}us ({:.1}x)",
        factored_time / sweeps as f64 * 1e6,
        dense_time / sweeps as f64 * 1e6,
        dense_time / factored_time
    );
}
