//! Benchmark CLI: scenario runs with per-step or per-iteration residual
//! logging, CSV/SVG reports, optional problem dumps and certificates.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use amgs::bench::{
    build_scenario, emit_report, run_entire_simulation_with, run_stepwise_experiment_with,
    RunOptions, ScenarioName, ScenarioSpec, SolverSpec,
};
use amgs::lcp::OmegaChoice;
use amgs::sim::SolverKind;

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Contact-LCP solver benchmarks on 2D circle scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario with one or more solvers and write reports.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario: pool1, pool2, or stacking.
    #[arg(long)]
    scenario: String,

    /// Solvers to compare: pgs, amgs-dense, amgs, amgs-boxed.
    /// Repeatable; comma-separated values are accepted.
    #[arg(long = "solver", value_delimiter = ',', required = true)]
    solvers: Vec<String>,

    /// Omega choice for the modulus solvers: "avg" (scalar, diagonal
    /// average over gamma) or "alphaD" (alpha times the diagonal).
    #[arg(long, default_value = "alphaD")]
    omega: String,

    /// Alpha values for omega = alphaD; a comma-separated list expands
    /// each modulus solver into one run per alpha.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5])]
    alpha: Vec<f64>,

    /// Modulus parameter gamma.
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,

    /// Simulation steps (defaults to the scenario's horizon).
    #[arg(long)]
    steps: Option<usize>,

    /// Solver iterations per simulation step.
    #[arg(long)]
    iters: Option<usize>,

    /// Freeze the assembled problem at this step and iterate deeply.
    #[arg(long)]
    deep_step: Option<usize>,

    /// Iteration budget of the deep solves.
    #[arg(long, default_value_t = 200)]
    deep_iters: usize,

    /// Set the friction coefficient to zero.
    #[arg(long)]
    frictionless: bool,

    /// Placement seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Circle count override (e.g. 150 for the stacking timing runs).
    #[arg(long)]
    circles: Option<usize>,

    /// Time step in seconds.
    #[arg(long)]
    dt: Option<f64>,

    /// Output directory for reports.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,

    /// Dump assembled problems in MatrixMarket form under OUT/lcp.
    #[arg(long)]
    dump_lcp: bool,

    /// Write a contraction certificate report to OUT/certificate.txt.
    #[arg(long)]
    certificate: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::FAILURE
            }
        },
    }
}

fn run(args: RunArgs) -> Result<(), String> {
    let name = ScenarioName::parse(&args.scenario)
        .ok_or_else(|| format!("unknown scenario `{}`", args.scenario))?;
    let mut spec = ScenarioSpec::named(name);
    if let Some(steps) = args.steps {
        spec.steps = steps;
    }
    if let Some(iters) = args.iters {
        spec.iters_per_step = iters;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(circles) = args.circles {
        spec.circle_count = circles;
    }
    if let Some(dt) = args.dt {
        spec.dt = dt;
    }
    if args.frictionless {
        spec.friction = 0.0;
    }

    let solvers = expand_solvers(&args)?;
    let options = RunOptions {
        dump_lcp_dir: args.dump_lcp.then(|| args.out.join("lcp")),
        certificate_path: args.certificate.then(|| args.out.join("certificate.txt")),
        max_threads: None,
    };

    let traces = match args.deep_step {
        Some(deep_step) => {
            run_stepwise_experiment_with(&spec, &solvers, deep_step, args.deep_iters, &options)
                .map_err(|e| e.to_string())?
        }
        None => {
            run_entire_simulation_with(&spec, &solvers, &options).map_err(|e| e.to_string())?
        }
    };

    let files = emit_report(&traces, &args.out).map_err(|e| e.to_string())?;
    for trace in &traces {
        match trace.iterations_to_target {
            Some(iters) => println!(
                "{}: reached target residual in {iters} iterations ({:.3} ms)",
                trace.label,
                trace.wall_to_target_ms.unwrap_or_default()
            ),
            None if !trace.per_iter.is_empty() => {
                println!("{}: target residual not reached", trace.label)
            }
            None => println!(
                "{}: {} steps in {:.1} ms",
                trace.label,
                trace.per_step.len(),
                trace.total_wall_ms
            ),
        }
    }
    // initial scene snapshot for quick inspection of the placement
    let snapshot = args.out.join("scene_initial.csv");
    let scene = build_scenario(&spec).map_err(|e| e.to_string())?;
    std::fs::write(&snapshot, scene.snapshot_csv()).map_err(|e| e.to_string())?;
    for file in files {
        println!("wrote {}", file.display());
    }
    println!("wrote {}", snapshot.display());
    Ok(())
}

fn expand_solvers(args: &RunArgs) -> Result<Vec<SolverSpec>, String> {
    let mut specs = Vec::new();
    for raw in &args.solvers {
        let kind = SolverKind::parse(raw).ok_or_else(|| format!("unknown solver `{raw}`"))?;
        if kind == SolverKind::Pgs {
            specs.push(SolverSpec {
                kind,
                omega: OmegaChoice::ScaledDiagonal(0.5),
                gamma: args.gamma,
            });
            continue;
        }
        match args.omega.as_str() {
            "avg" => specs.push(SolverSpec {
                kind,
                omega: OmegaChoice::ScalarAverage,
                gamma: args.gamma,
            }),
            "alphaD" => {
                for &alpha in &args.alpha {
                    if alpha <= 0.0 {
                        return Err(format!("alpha must be positive, got {alpha}"));
                    }
                    specs.push(SolverSpec {
                        kind,
                        omega: OmegaChoice::ScaledDiagonal(alpha),
                        gamma: args.gamma,
                    });
                }
            }
            other => return Err(format!("unknown omega choice `{other}`")),
        }
    }
    Ok(specs)
}
