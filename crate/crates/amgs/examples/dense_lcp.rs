//! Solve a small dense LCP three ways: exhaustive enumeration (the
//! reference), projected Gauss-Seidel, and the accelerated modulus sweep.
//!
//! ```bash
//! cargo run --example dense_lcp
//! ```

use amgs::lcp::{amgs_dense_solve, oracle_solve, pgs_solve, residual, LcpProblem, SolverConfig};
use amgs::linalg::DenseMatrix;

fn main() {
    // a stiff little 4x4 contact-like matrix
    let a = DenseMatrix::from_rows(&[
        vec![2.0, -1.0, 0.0, 0.2],
        vec![-1.0, 2.0, -1.0, 0.0],
        vec![0.0, -1.0, 2.0, -1.0],
        vec![0.2, 0.0, -1.0, 2.0],
    ]);
    let q = vec![-1.0, 0.5, -2.0, 1.0];
    let prob = LcpProblem::new(a, q).unwrap();

    let reference = oracle_solve(&prob).unwrap();
    println!("enumeration oracle:");
    println!("  lambda = {:?}", reference.lambda);
    println!("  w      = {:?}", reference.w);

    let cfg = SolverConfig {
        max_iterations: 200,
        residual_tol: 1e-10,
        record_history: true,
        ..Default::default()
    };
    let lambda0 = vec![0.0; prob.dim()];

    let gs = pgs_solve(&prob, &lambda0, &cfg).unwrap();
    println!(
        "projected Gauss-Seidel: {} sweeps, residual {:.2e}",
        gs.iterations,
        residual(&prob, &gs.lambda).unwrap()
    );

    let modulus = amgs_dense_solve(&prob, &lambda0, &cfg).unwrap();
    println!(
        "accelerated modulus sweep: {} sweeps, residual {:.2e}",
        modulus.iterations,
        residual(&prob, &modulus.lambda).unwrap()
    );

    for (k, (a, b)) in gs.lambda.iter().zip(&reference.lambda).enumerate() {
        println!("  lambda[{k}]: gs {a:.12} vs oracle {b:.12}");
    }
}
