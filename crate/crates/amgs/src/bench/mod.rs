//! Scenario builders, experiment runners, and reporting.
//!
//! The benchmark protocol has two modes. Entire-simulation runs step each
//! solver through the full horizon with a fixed per-step iteration budget
//! and log the end-of-step residual. Stepwise runs drive the simulation to
//! a chosen step, freeze the assembled problem and its warm-started seed,
//! and let every solver iterate deeply from that identical state, which is
//! how the per-iteration convergence comparisons are produced.

mod report;
mod scenario;
mod runner;

pub use report::{emit_report, parse_report_csv, ReportRow};
pub use runner::{
    run_entire_simulation, run_entire_simulation_with, run_stepwise_experiment,
    run_stepwise_experiment_with, RunOptions, RES_TARGET,
};
pub use scenario::build_scenario;

use crate::lcp::OmegaChoice;
use crate::sim::{SimError, SolverKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Contact(#[from] crate::contact::ContactError),
    #[error("geometry overflow: {count} circles of radius {radius} cannot fit width {width}")]
    GeometryOverflow {
        count: usize,
        radius: f64,
        width: f64,
    },
    #[error("invalid scenario parameter: {0}")]
    InvalidSpec(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

/// The benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    Pool1,
    Pool2,
    Stacking,
}

impl ScenarioName {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pool1" => Some(ScenarioName::Pool1),
            "pool2" => Some(ScenarioName::Pool2),
            "stacking" => Some(ScenarioName::Stacking),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioName::Pool1 => "pool1",
            ScenarioName::Pool2 => "pool2",
            ScenarioName::Stacking => "stacking",
        }
    }
}

/// Either one shared mass or a linear ramp over the initial height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassModel {
    Uniform(f64),
    LinearInHeight { min: f64, max: f64 },
}

/// Full description of a benchmark run, defaulting to the standard
/// parameter sets of the three scenarios.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub circle_count: usize,
    pub radius: f64,
    pub mass: MassModel,
    pub friction: f64,
    pub restitution: f64,
    pub area_width: f64,
    pub seed: u64,
    pub steps: usize,
    pub iters_per_step: usize,
    pub dt: f64,
}

impl ScenarioSpec {
    /// 221 circles of 21 cm and 2 kg stuffed into a 6 m wide container.
    pub fn pool1() -> Self {
        Self {
            name: ScenarioName::Pool1,
            circle_count: 221,
            radius: 0.21,
            mass: MassModel::Uniform(2.0),
            friction: 0.1,
            restitution: 0.2,
            area_width: 6.0,
            seed: 0,
            steps: 1000,
            iters_per_step: 10,
            dt: 1.0 / 60.0,
        }
    }

    /// Pool geometry with masses ramping from 1 kg at the bottom to 3 kg
    /// at the top, which makes the pile harder to support.
    pub fn pool2() -> Self {
        Self {
            name: ScenarioName::Pool2,
            mass: MassModel::LinearInHeight { min: 1.0, max: 3.0 },
            ..Self::pool1()
        }
    }

    /// A vertical column of 18 cm, 1 kg circles with 1 mm initial gaps.
    pub fn stacking() -> Self {
        Self {
            name: ScenarioName::Stacking,
            circle_count: 30,
            radius: 0.18,
            mass: MassModel::Uniform(1.0),
            friction: 0.1,
            restitution: 0.2,
            area_width: 6.0,
            seed: 0,
            steps: 1000,
            iters_per_step: 10,
            dt: 1.0 / 60.0,
        }
    }

    pub fn named(name: ScenarioName) -> Self {
        match name {
            ScenarioName::Pool1 => Self::pool1(),
            ScenarioName::Pool2 => Self::pool2(),
            ScenarioName::Stacking => Self::stacking(),
        }
    }
}

/// A solver configuration under benchmark, with a printable label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSpec {
    pub kind: SolverKind,
    pub omega: OmegaChoice,
    pub gamma: f64,
}

impl SolverSpec {
    pub fn pgs() -> Self {
        Self {
            kind: SolverKind::Pgs,
            omega: OmegaChoice::ScaledDiagonal(0.5),
            gamma: 2.0,
        }
    }

    pub fn amgs_scaled_diag(alpha: f64) -> Self {
        Self {
            kind: SolverKind::Amgs,
            omega: OmegaChoice::ScaledDiagonal(alpha),
            gamma: 2.0,
        }
    }

    pub fn amgs_average_identity() -> Self {
        Self {
            kind: SolverKind::Amgs,
            omega: OmegaChoice::ScalarAverage,
            gamma: 2.0,
        }
    }

    pub fn amgs_dense(alpha: f64) -> Self {
        Self {
            kind: SolverKind::AmgsDense,
            omega: OmegaChoice::ScaledDiagonal(alpha),
            gamma: 2.0,
        }
    }

    /// The α of an `Ω = αD` configuration, when applicable.
    pub fn alpha(&self) -> Option<f64> {
        match (self.kind, self.omega) {
            (SolverKind::Pgs, _) => None,
            (_, OmegaChoice::ScaledDiagonal(a)) => Some(a),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SolverKind::Pgs => "pgs".to_string(),
            kind => {
                let omega = match self.omega {
                    OmegaChoice::ScaledDiagonal(a) => format!("{a}D"),
                    OmegaChoice::ScalarIdentity(w) => format!("{w}E"),
                    OmegaChoice::ScalarAverage => "avgE".to_string(),
                };
                format!("{}[{}]", kind.label(), omega)
            }
        }
    }
}

/// One per-step record of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub residual: f64,
    pub rows: usize,
    pub iterations: usize,
    pub wall_ms: f64,
}

/// One per-iteration record of a deep solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub residual: f64,
}

/// Everything recorded for one solver over one experiment.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub label: String,
    pub alpha: Option<f64>,
    pub per_step: Vec<StepRecord>,
    pub per_iter: Vec<IterRecord>,
    /// First sweep index (1-based) whose residual dropped below
    /// [`RES_TARGET`] in the deep solve, if it did.
    pub iterations_to_target: Option<usize>,
    pub wall_to_target_ms: Option<f64>,
    pub total_wall_ms: f64,
}

impl SolveTrace {
    pub fn new(label: String, alpha: Option<f64>) -> Self {
        Self {
            label,
            alpha,
            per_step: Vec::new(),
            per_iter: Vec::new(),
            iterations_to_target: None,
            wall_to_target_ms: None,
            total_wall_ms: 0.0,
        }
    }
}
