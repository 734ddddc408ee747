//! MatrixMarket round trips: dense problems, factored contact problems,
//! and residual history CSVs.
//!
//! ```bash
//! cargo run --example matrix_io
//! ```

use amgs::contact::io::{load_contact_problem, save_contact_problem};
use amgs::contact::synthetic::random_contact_problem;
use amgs::lcp::io::{load_maybe_boxed, save_boxed_problem, write_residual_csv};
use amgs::lcp::{amgs_dense_solve, BoxedLcpProblem, LcpProblem, SolverConfig};
use amgs::linalg::mm;
use amgs::linalg::DenseMatrix;

fn main() {
    let out = std::env::temp_dir().join("amgs_matrix_io_example");
    let _ = std::fs::remove_dir_all(&out);
    std::fs::create_dir_all(&out).unwrap();

    // dense problem directory with bounds
    let prob = LcpProblem::new(
        DenseMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]),
        vec![-1.0, -0.5],
    )
    .unwrap();
    let boxed = BoxedLcpProblem::new(prob, vec![0.0, 0.0], vec![0.4, f64::INFINITY]).unwrap();
    let dense_dir = out.join("dense");
    save_boxed_problem(&dense_dir, &boxed).unwrap();
    let (reloaded, bounds) = load_maybe_boxed(&dense_dir).unwrap();
    println!(
        "dense round trip: A identical = {}, bounds = {:?}",
        reloaded.a() == boxed.base.a(),
        bounds.is_some()
    );

    // factored contact problem
    let contact = random_contact_problem(8, 12, 3);
    let contact_dir = out.join("contact");
    save_contact_problem(&contact_dir, &contact, None).unwrap();
    let (back, _) = load_contact_problem(&contact_dir).unwrap();
    println!(
        "contact round trip: J identical = {}, diag identical = {}",
        back.j == contact.j,
        back.adiag == contact.adiag
    );

    // a bare sparse matrix in coordinate format
    let j_path = out.join("jacobian.mtx");
    mm::write_coordinate(&j_path, &contact.j).unwrap();
    let j_text = std::fs::read_to_string(&j_path).unwrap();
    println!("\nhead of {}:", j_path.display());
    for line in j_text.lines().take(4) {
        println!("  {line}");
    }

    // residual history CSV at 17 significant digits
    let solved = amgs_dense_solve(
        &contact.densify().unwrap(),
        &vec![0.0; contact.constraints()],
        &SolverConfig {
            max_iterations: 40,
            record_history: true,
            ..Default::default()
        },
    )
    .unwrap();
    let csv_path = out.join("residuals.csv");
    write_residual_csv(&csv_path, &solved.residual_history).unwrap();
    println!("\nwrote {} files under {}", 3, out.display());
}
