//! Per-iteration residual curves on the stacking scenario.
//!
//! Drives a 30-circle column to step 100, freezes the assembled problem,
//! and lets each solver iterate deeply from the same warm-started seed.
//! Writes the report CSVs and the log-scale SVG plots.
//!
//! ```bash
//! cargo run --release --example stacking_residuals
//! ```

use amgs::bench::{emit_report, run_stepwise_experiment, ScenarioSpec, SolverSpec};

fn main() {
    let mut spec = ScenarioSpec::stacking();
    spec.friction = 0.0;
    let solvers = [
        SolverSpec::pgs(),
        SolverSpec::amgs_average_identity(),
        SolverSpec::amgs_scaled_diag(0.5),
        SolverSpec::amgs_scaled_diag(0.2),
    ];
    let traces = run_stepwise_experiment(&spec, &solvers, 100, 5000).unwrap();
    for trace in &traces {
        match trace.iterations_to_target {
            Some(iters) => println!("{:<12} reaches 1e-4 in {iters} iterations", trace.label),
            None => println!("{:<12} does not reach 1e-4 in 5000 iterations", trace.label),
        }
    }
    let out = std::path::Path::new("bench-out/stacking_residuals");
    let files = emit_report(&traces, out).unwrap();
    for f in files {
        println!("wrote {}", f.display());
    }
}
