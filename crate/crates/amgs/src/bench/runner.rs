use std::path::PathBuf;
use std::time::Instant;

use super::{build_scenario, BenchError, IterRecord, ScenarioSpec, SolveTrace, SolverSpec, StepRecord};
use crate::contact::{certificate, ContactLcp};
use crate::lcp::SolverConfig;
use crate::sim::{
    assemble, detect_contacts, solve_with, step, warm_start_map, Bounds, SolverKind,
    WarmStartCache,
};

/// Residual threshold the iteration-count comparisons target.
pub const RES_TARGET: f64 = 1e-4;

/// Optional side outputs of a run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Dump every assembled problem (entire mode: each step of the first
    /// solver's run; stepwise mode: the frozen deep problem) under this
    /// directory in the factored MatrixMarket layout.
    pub dump_lcp_dir: Option<PathBuf>,
    /// Write a contraction certificate report for the densified problem
    /// (the frozen deep problem, or the first solver's final step).
    pub certificate_path: Option<PathBuf>,
    /// Cap on concurrent solver runs; `BENCH_THREADS` caps this further.
    pub max_threads: Option<usize>,
}

fn thread_budget(requested: Option<usize>, runs: usize) -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let mut budget = requested.unwrap_or(hw).max(1);
    if let Ok(env) = std::env::var("BENCH_THREADS") {
        if let Ok(cap) = env.trim().parse::<usize>() {
            budget = budget.min(cap.max(1));
        }
    }
    budget.min(runs.max(1))
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn solver_config(solver: &SolverSpec, iterations: usize, tol: f64, history: bool) -> SolverConfig {
    SolverConfig {
        gamma: solver.gamma,
        omega: solver.omega,
        max_iterations: iterations,
        residual_tol: tol,
        record_history: history,
    }
}

/// Steps the full simulation once per solver, logging the end-of-step
/// residual `RES(λ)` after the fixed per-step iteration budget.
pub fn run_entire_simulation(
    spec: &ScenarioSpec,
    solvers: &[SolverSpec],
) -> Result<Vec<SolveTrace>, BenchError> {
    run_entire_simulation_with(spec, solvers, &RunOptions::default())
}

pub fn run_entire_simulation_with(
    spec: &ScenarioSpec,
    solvers: &[SolverSpec],
    options: &RunOptions,
) -> Result<Vec<SolveTrace>, BenchError> {
    let threads = thread_budget(options.max_threads, solvers.len());
    let mut results: Vec<Option<Result<SolveTrace, BenchError>>> =
        (0..solvers.len()).map(|_| None).collect();
    for (chunk_start, chunk) in solvers
        .chunks(threads)
        .enumerate()
        .map(|(c, chunk)| (c * threads, chunk))
    {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .enumerate()
                .map(|(offset, solver)| {
                    let index = chunk_start + offset;
                    scope.spawn(move || (index, run_one_entire(spec, solver, index == 0, options)))
                })
                .collect();
            for handle in handles {
                let (index, outcome) = handle.join().expect("runner thread panicked");
                results[index] = Some(outcome);
            }
        });
    }
    results
        .into_iter()
        .map(|r| r.expect("every run recorded"))
        .collect()
}

fn run_one_entire(
    spec: &ScenarioSpec,
    solver: &SolverSpec,
    is_first: bool,
    options: &RunOptions,
) -> Result<SolveTrace, BenchError> {
    let mut scene = build_scenario(spec)?;
    let mut warm = WarmStartCache::default();
    let cfg = solver_config(solver, spec.iters_per_step, 0.0, true);
    let mut trace = SolveTrace::new(solver.label(), solver.alpha());
    let started = Instant::now();
    let mut last_problem: Option<(ContactLcp, Option<Bounds>)> = None;
    for t in 0..spec.steps {
        let step_started = Instant::now();
        let outcome = step(&mut scene, solver.kind, &cfg, &mut warm)?;
        let wall_ms = ms(step_started);
        trace.per_step.push(StepRecord {
            step: t,
            residual: outcome.residual,
            rows: outcome.rows,
            iterations: outcome.solution.iterations,
            wall_ms,
        });
        if is_first {
            if let Some(dir) = &options.dump_lcp_dir {
                let path = dir.join(format!("step_{t:05}"));
                crate::contact::io::save_contact_problem(
                    &path,
                    &outcome.problem,
                    outcome
                        .bounds
                        .as_ref()
                        .map(|b| (b.l.as_slice(), b.u.as_slice())),
                )?;
            }
            if options.certificate_path.is_some() && t + 1 == spec.steps {
                last_problem = Some((outcome.problem, outcome.bounds));
            }
        }
    }
    trace.total_wall_ms = ms(started);
    if is_first {
        if let (Some(path), Some((problem, bounds))) =
            (&options.certificate_path, last_problem.as_ref())
        {
            write_certificate(path, problem, bounds.as_ref(), solver)?;
        }
    }
    Ok(trace)
}

/// Drives the simulation to `deep_step` with the first solver, then lets
/// every solver iterate `deep_iters` times on the identical frozen
/// problem from the identical warm-started seed.
///
/// Each solver contributes its per-iteration residual curve plus the
/// sweep count and wall time of a separate run stopped at [`RES_TARGET`].
/// The per-step log of the drive phase lands on the first solver's trace.
pub fn run_stepwise_experiment(
    spec: &ScenarioSpec,
    solvers: &[SolverSpec],
    deep_step: usize,
    deep_iters: usize,
) -> Result<Vec<SolveTrace>, BenchError> {
    run_stepwise_experiment_with(spec, solvers, deep_step, deep_iters, &RunOptions::default())
}

pub fn run_stepwise_experiment_with(
    spec: &ScenarioSpec,
    solvers: &[SolverSpec],
    deep_step: usize,
    deep_iters: usize,
    options: &RunOptions,
) -> Result<Vec<SolveTrace>, BenchError> {
    if solvers.is_empty() {
        return Ok(Vec::new());
    }
    if deep_step > spec.steps {
        return Err(BenchError::InvalidSpec(format!(
            "deep step {deep_step} exceeds the {}-step horizon",
            spec.steps
        )));
    }
    let drive = &solvers[0];
    let mut scene = build_scenario(spec)?;
    let mut warm = WarmStartCache::default();
    let drive_cfg = solver_config(drive, spec.iters_per_step, 0.0, true);
    let mut traces: Vec<SolveTrace> = solvers
        .iter()
        .map(|s| SolveTrace::new(s.label(), s.alpha()))
        .collect();
    for t in 0..deep_step {
        let step_started = Instant::now();
        let outcome = step(&mut scene, drive.kind, &drive_cfg, &mut warm)?;
        traces[0].per_step.push(StepRecord {
            step: t,
            residual: outcome.residual,
            rows: outcome.rows,
            iterations: outcome.solution.iterations,
            wall_ms: ms(step_started),
        });
    }

    // Reproduce the front half of a step to freeze the problem the next
    // step would solve: gravity kick, detection, assembly, warm seed.
    for body in &mut scene.bodies {
        if body.inv_mass > 0.0 {
            body.linear_velocity = body.linear_velocity + scene.gravity.scale(scene.dt);
        }
    }
    let contacts = detect_contacts(&scene).map_err(BenchError::Sim)?;
    let (problem, bounds, keys) =
        assemble(&scene, &contacts, scene.friction > 0.0, &warm).map_err(BenchError::Sim)?;
    let lambda0 = warm_start_map(&warm, &keys, bounds.as_ref());

    if let Some(dir) = &options.dump_lcp_dir {
        let path = dir.join(format!("deep_step_{deep_step:05}"));
        crate::contact::io::save_contact_problem(
            &path,
            &problem,
            bounds.as_ref().map(|b| (b.l.as_slice(), b.u.as_slice())),
        )?;
    }
    if let Some(path) = &options.certificate_path {
        let reference = solvers
            .iter()
            .find(|s| s.kind != SolverKind::Pgs)
            .unwrap_or(drive);
        write_certificate(path, &problem, bounds.as_ref(), reference)?;
    }

    if deep_iters > 0 {
        deep_solves(
            &problem,
            bounds.as_ref(),
            &lambda0,
            solvers,
            deep_iters,
            &mut traces,
            options,
        )?;
    }
    Ok(traces)
}

fn deep_solves(
    problem: &ContactLcp,
    bounds: Option<&Bounds>,
    lambda0: &[f64],
    solvers: &[SolverSpec],
    deep_iters: usize,
    traces: &mut [SolveTrace],
    options: &RunOptions,
) -> Result<(), BenchError> {
    let threads = thread_budget(options.max_threads, solvers.len());
    let mut results: Vec<Option<Result<DeepOutcome, BenchError>>> =
        (0..solvers.len()).map(|_| None).collect();
    for (chunk_start, chunk) in solvers
        .chunks(threads)
        .enumerate()
        .map(|(c, chunk)| (c * threads, chunk))
    {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .enumerate()
                .map(|(offset, solver)| {
                    let index = chunk_start + offset;
                    scope.spawn(move || {
                        (
                            index,
                            deep_solve_one(problem, bounds, lambda0, solver, deep_iters),
                        )
                    })
                })
                .collect();
            for handle in handles {
                let (index, outcome) = handle.join().expect("deep solve thread panicked");
                results[index] = Some(outcome);
            }
        });
    }
    for (trace, result) in traces.iter_mut().zip(results) {
        let outcome = result.expect("every deep solve recorded")?;
        trace.per_iter = outcome.per_iter;
        trace.iterations_to_target = outcome.iterations_to_target;
        trace.wall_to_target_ms = outcome.wall_to_target_ms;
        trace.total_wall_ms = outcome.curve_wall_ms;
    }
    Ok(())
}

struct DeepOutcome {
    per_iter: Vec<IterRecord>,
    iterations_to_target: Option<usize>,
    wall_to_target_ms: Option<f64>,
    curve_wall_ms: f64,
}

fn deep_solve_one(
    problem: &ContactLcp,
    bounds: Option<&Bounds>,
    lambda0: &[f64],
    solver: &SolverSpec,
    deep_iters: usize,
) -> Result<DeepOutcome, BenchError> {
    // Full curve for the residual-vs-iteration figures.
    let curve_cfg = solver_config(solver, deep_iters, 0.0, true);
    let curve_started = Instant::now();
    let solution =
        solve_with(solver.kind, problem, bounds, lambda0, &curve_cfg).map_err(BenchError::Sim)?;
    let curve_wall_ms = ms(curve_started);
    let per_iter = solution
        .residual_history
        .iter()
        .enumerate()
        .map(|(k, &residual)| IterRecord {
            iter: k + 1,
            residual,
        })
        .collect();

    // Separate timed run stopped at the target residual.
    let timed_cfg = solver_config(solver, deep_iters, RES_TARGET, false);
    let timed_started = Instant::now();
    let timed =
        solve_with(solver.kind, problem, bounds, lambda0, &timed_cfg).map_err(BenchError::Sim)?;
    let timed_wall = ms(timed_started);
    let (iterations_to_target, wall_to_target_ms) = if timed.converged {
        (Some(timed.iterations), Some(timed_wall))
    } else {
        (None, None)
    };
    Ok(DeepOutcome {
        per_iter,
        iterations_to_target,
        wall_to_target_ms,
        curve_wall_ms,
    })
}

fn write_certificate(
    path: &std::path::Path,
    problem: &ContactLcp,
    bounds: Option<&Bounds>,
    solver: &SolverSpec,
) -> Result<(), BenchError> {
    let text = if problem.constraints() == 0 {
        "no contacts: certificate undefined\n".to_string()
    } else {
        let dense = problem.densify()?;
        let cfg = solver_config(solver, 1, 0.0, false);
        let mut cert = certificate(dense.a(), &cfg)?;
        if let Some(b) = bounds {
            cert = cert.for_bounds(&b.l);
        }
        cert.report()
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| BenchError::Io {
            path: parent.display().to_string(),
            source: e,
        })?;
    }
    std::fs::write(path, text).map_err(|e| BenchError::Io {
        path: path.display().to_string(),
        source: e,
    })
}
