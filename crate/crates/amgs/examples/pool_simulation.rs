//! Entire-simulation residual logging on a pool of circles.
//!
//! A scaled-down pool (60 circles, 300 steps) stepped by projected
//! Gauss-Seidel and the factored modulus sweep over an α grid, ten
//! iterations per step with warm starting. Emits the per-step report and
//! a final scene snapshot.
//!
//! ```bash
//! cargo run --release --example pool_simulation
//! ```

use amgs::bench::{build_scenario, emit_report, run_entire_simulation, ScenarioSpec, SolverSpec};
use amgs::lcp::SolverConfig;
use amgs::sim::{step, SolverKind, WarmStartCache};

fn main() {
    let mut spec = ScenarioSpec::pool1();
    spec.circle_count = 60;
    spec.steps = 300;
    let mut solvers = vec![SolverSpec::pgs()];
    for alpha in [0.2, 0.4, 0.5] {
        solvers.push(SolverSpec::amgs_scaled_diag(alpha));
    }
    let traces = run_entire_simulation(&spec, &solvers).unwrap();
    for trace in &traces {
        let tail: f64 = trace.per_step[250..].iter().map(|r| r.residual).sum::<f64>() / 50.0;
        println!(
            "{:<12} total {:>8.1} ms, mean end-of-step residual (last 50 steps) {:.3e}",
            trace.label, trace.total_wall_ms, tail
        );
    }
    let out = std::path::Path::new("bench-out/pool_simulation");
    let files = emit_report(&traces, out).unwrap();
    for f in files {
        println!("wrote {}", f.display());
    }

    // replay the winner and snapshot the settled scene
    let mut scene = build_scenario(&spec).unwrap();
    let mut warm = WarmStartCache::default();
    let cfg = SolverConfig {
        max_iterations: spec.iters_per_step,
        ..Default::default()
    };
    for _ in 0..spec.steps {
        step(&mut scene, SolverKind::Amgs, &cfg, &mut warm).unwrap();
    }
    let snapshot = out.join("scene_settled.csv");
    std::fs::write(&snapshot, scene.snapshot_csv()).unwrap();
    println!("wrote {}", snapshot.display());
}
