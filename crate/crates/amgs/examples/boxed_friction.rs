//! Bounded impulses: the boxed complementarity solve behind friction.
//!
//! First a one-constraint box showing the clamped branch (`λ` pinned at
//! the upper bound, `w ≤ 0`), then a spinning disc dropped on the floor:
//! the bounded tangent impulses trade spin for forward motion until the
//! disc rolls without slipping, while the frictionless twin spins in
//! place forever. Tangent rows are bounded by `±μ λ̂ₙ` from the previous
//! step's normal impulses.
//!
//! ```bash
//! cargo run --example boxed_friction
//! ```

use amgs::contact::synthetic::factor_as_contact;
use amgs::contact::{amgs_boxed_solve, p_blcp};
use amgs::lcp::{LcpProblem, SolverConfig};
use amgs::linalg::DenseMatrix;
use amgs::sim::{step, Body, Scene, SolverKind, Vec2, WarmStartCache};

fn main() {
    // clamp demo: unconstrained solution would be lambda = 2
    let prob = LcpProblem::new(DenseMatrix::from_rows(&[vec![2.0]]), vec![-4.0]).unwrap();
    let contact = factor_as_contact(&prob);
    let cfg = SolverConfig {
        max_iterations: 100,
        residual_tol: 1e-12,
        record_history: true,
        ..Default::default()
    };
    let solution = amgs_boxed_solve(&contact, (&[0.0], &[1.0]), &[0.0], &cfg).unwrap();
    println!(
        "boxed 1x1: lambda = {:?} (upper bound 1), w = {:?} <= 0 at the bound",
        solution.lambda, solution.w
    );
    println!("projection: p([2.5]) into [0,1] = {:?}", p_blcp(&[2.5], &[0.0], &[1.0]));

    // a disc spun up and dropped onto the floor; for a solid disc the
    // rolling-without-slipping end state keeps a third of the spin
    let spin = 20.0;
    let radius = 0.2;
    let run = |mu: f64| {
        let mut disc = Body::dynamic_circle(1.0, radius, Vec2::new(0.0, 0.1999));
        disc.angular_velocity = spin;
        let mut scene = Scene::new(vec![
            Body::static_half_plane(Vec2::new(0.0, 1.0), 0.0),
            disc,
        ]);
        scene.friction = mu;
        scene.restitution = 0.0;
        let mut warm = WarmStartCache::default();
        let step_cfg = SolverConfig {
            max_iterations: 30,
            ..Default::default()
        };
        for _ in 0..120 {
            step(&mut scene, SolverKind::AmgsBoxed, &step_cfg, &mut warm).unwrap();
        }
        scene.bodies[1]
    };

    let rolling = run(0.3);
    let slipping = run(0.0);
    println!("\ndisc with initial spin {spin} rad/s after 2 s on the floor:");
    println!(
        "  mu = 0.3: v = {:.3} m/s, omega = {:.3} rad/s, slip = {:.2e}",
        rolling.linear_velocity.x,
        rolling.angular_velocity,
        rolling.linear_velocity.x + radius * rolling.angular_velocity
    );
    println!(
        "  mu = 0.0: v = {:.3} m/s, omega = {:.3} rad/s (spins in place)",
        slipping.linear_velocity.x, slipping.angular_velocity
    );
    println!(
        "  rolling limit for a solid disc: omega/3 = {:.3} rad/s",
        spin / 3.0
    );
}
