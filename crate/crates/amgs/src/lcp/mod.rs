//! Problem definitions and the dense solver family.
//!
//! `LcpProblem` is the generic complementarity problem over an explicit
//! coefficient matrix. The solvers in this module all work on that dense
//! form: projected Gauss-Seidel, the modulus-based splitting family with
//! its classic presets, and the accelerated modulus-based Gauss-Seidel
//! sweep in per-component form. The factored, matrix-free variants live
//! in [`crate::contact`].

mod dense_amgs;
pub mod io;
mod modulus;
mod oracle;
mod pgs;
mod splitting;

pub use dense_amgs::{amgs_dense_boxed_solve, amgs_dense_solve, DenseAmgs};
pub use modulus::{from_modulus, to_modulus};
pub use oracle::oracle_solve;
pub use pgs::{pgs_boxed_solve, pgs_solve};
pub use splitting::{ammsi_solve, mmsi_solve, splitting_fixed_point_residual, SplittingPreset};

use crate::linalg::{norm2, DenseMatrix, LinalgError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LcpError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric: |A - Aᵀ| = {deviation} at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize, deviation: f64 },
    #[error("non-positive diagonal entry {value} at index {index}")]
    NonPositiveDiagonal { index: usize, value: f64 },
    #[error("invalid bounds at index {index}: l = {l}, u = {u}")]
    InvalidBounds { index: usize, l: f64, u: f64 },
    #[error("preset {preset} is not valid for {solver}")]
    InvalidPreset { preset: String, solver: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("problem too large for exhaustive enumeration: m = {m} (limit {limit})")]
    TooLarge { m: usize, limit: usize },
    #[error("no complementary basis found (matrix not positive definite?)")]
    NoFeasibleBasis,
    #[error("complementarity violated at index {index}: lambda*w = {product}")]
    ComplementarityViolation { index: usize, product: f64 },
}

/// `LCP(q, A)`: find `λ ≥ 0` with `w = Aλ + q ≥ 0` and `λᵀw = 0`.
///
/// `A` is required to be symmetric (to 1e-12 relative) with a strictly
/// positive diagonal. Positive definiteness is assumed, not enforced; the
/// oracle and debug paths check it via elimination when they need it.
#[derive(Debug, Clone)]
pub struct LcpProblem {
    a: DenseMatrix,
    q: Vec<f64>,
}

impl LcpProblem {
    pub fn new(a: DenseMatrix, q: Vec<f64>) -> Result<Self, LcpError> {
        if !a.is_square() {
            return Err(LcpError::Linalg(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            }));
        }
        if q.len() != a.rows() {
            return Err(LcpError::DimensionMismatch {
                expected: a.rows(),
                got: q.len(),
            });
        }
        let scale = a.max_abs().max(1.0);
        for i in 0..a.rows() {
            let d = a[(i, i)];
            if !(d > 0.0) {
                return Err(LcpError::NonPositiveDiagonal { index: i, value: d });
            }
            for j in i + 1..a.cols() {
                let dev = (a[(i, j)] - a[(j, i)]).abs();
                if dev > 1e-12 * scale {
                    return Err(LcpError::NotSymmetric { i, j, deviation: dev });
                }
            }
        }
        Ok(Self { a, q })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.a.diagonal()
    }
}

/// LCP with box bounds `l ≤ λ ≤ u` and sign conditions on `w` at the
/// active bound. `u` entries may be `+∞`.
#[derive(Debug, Clone)]
pub struct BoxedLcpProblem {
    pub base: LcpProblem,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

impl BoxedLcpProblem {
    pub fn new(base: LcpProblem, l: Vec<f64>, u: Vec<f64>) -> Result<Self, LcpError> {
        let m = base.dim();
        if l.len() != m {
            return Err(LcpError::DimensionMismatch { expected: m, got: l.len() });
        }
        if u.len() != m {
            return Err(LcpError::DimensionMismatch { expected: m, got: u.len() });
        }
        for i in 0..m {
            if !(l[i] < u[i]) {
                return Err(LcpError::InvalidBounds { index: i, l: l[i], u: u[i] });
            }
        }
        Ok(Self { base, l, u })
    }
}

/// Solver output. `w` is recomputed from the final iterate, so
/// `w = Aλ + q` holds to working accuracy by construction.
#[derive(Debug, Clone)]
pub struct Solution {
    pub lambda: Vec<f64>,
    pub w: Vec<f64>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Final modulus iterate `x` for the modulus-based solvers, `None`
    /// for solvers that iterate on λ directly.
    pub modulus: Option<Vec<f64>>,
    /// Multiply-accumulate count of the inner sweep loops, for cost models.
    pub work: u64,
}

/// Choice of the positive diagonal matrix Ω in the modulus-based methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaChoice {
    /// `Ω = ω̄ E` with an explicit scalar.
    ScalarIdentity(f64),
    /// `Ω = α D` where `D = diag(A)`.
    ScaledDiagonal(f64),
    /// `Ω = ω̄ E` with `ω̄ = (Σ Dᵢᵢ) / (m γ)`, the diagonal average split
    /// by γ; recomputed per problem.
    ScalarAverage,
}

/// Solver parameters shared across the family.
///
/// `residual_tol` is a strict threshold: a sweep that brings the residual
/// below it stops the solver; `0.0` therefore means "run the full budget",
/// which is the interactive-stepping protocol.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub gamma: f64,
    pub omega: OmegaChoice,
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: 2.0,
            omega: OmegaChoice::ScaledDiagonal(0.5),
            max_iterations: 10,
            residual_tol: 0.0,
            record_history: false,
        }
    }
}

impl SolverConfig {
    /// Configuration for convergence runs: iterate until the residual
    /// drops below `tol` (up to `max_iterations`), recording history.
    pub fn converging(tol: f64, max_iterations: usize) -> Self {
        Self {
            residual_tol: tol,
            max_iterations,
            record_history: true,
            ..Self::default()
        }
    }

    pub fn with_omega(mut self, omega: OmegaChoice) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<(), LcpError> {
        if !(self.gamma > 0.0) {
            return Err(LcpError::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        match self.omega {
            OmegaChoice::ScalarIdentity(w) if !(w > 0.0) => Err(LcpError::InvalidParameter(
                format!("omega scalar must be positive, got {w}"),
            )),
            OmegaChoice::ScaledDiagonal(a) if !(a > 0.0) => Err(LcpError::InvalidParameter(
                format!("omega alpha must be positive, got {a}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Concrete Ω diagonal resolved against a problem's diagonal.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ResolvedOmega {
    Scalar(f64),
    AlphaDiag(f64),
}

impl ResolvedOmega {
    pub(crate) fn resolve(choice: OmegaChoice, gamma: f64, adiag: &[f64]) -> Self {
        match choice {
            OmegaChoice::ScalarIdentity(w) => ResolvedOmega::Scalar(w),
            OmegaChoice::ScaledDiagonal(a) => ResolvedOmega::AlphaDiag(a),
            OmegaChoice::ScalarAverage => {
                let sum: f64 = adiag.iter().sum();
                ResolvedOmega::Scalar(sum / (adiag.len() as f64 * gamma))
            }
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, adiag: &[f64]) -> f64 {
        match *self {
            ResolvedOmega::Scalar(w) => w,
            ResolvedOmega::AlphaDiag(a) => a * adiag[i],
        }
    }
}

/// The residual `RES(λ) = ‖min{λ, Aλ + q}‖₂` used to measure convergence.
pub fn residual(prob: &LcpProblem, lambda: &[f64]) -> Result<f64, LcpError> {
    if lambda.len() != prob.dim() {
        return Err(LcpError::DimensionMismatch {
            expected: prob.dim(),
            got: lambda.len(),
        });
    }
    let w = prob.a.matvec(lambda)?;
    Ok(residual_from_w(lambda, &w, &prob.q))
}

pub(crate) fn residual_from_w(lambda: &[f64], a_lambda: &[f64], q: &[f64]) -> f64 {
    let mins: Vec<f64> = lambda
        .iter()
        .zip(a_lambda.iter().zip(q))
        .map(|(&l, (&al, &qi))| l.min(al + qi))
        .collect();
    norm2(&mins)
}

/// Natural-map residual for boxed problems:
/// `‖λ - clamp(λ - (Aλ + q), l, u)‖₂`. Reduces to the plain residual at
/// `l = 0`, `u = +∞` for nonnegative λ.
pub fn blcp_residual(prob: &BoxedLcpProblem, lambda: &[f64]) -> Result<f64, LcpError> {
    if lambda.len() != prob.base.dim() {
        return Err(LcpError::DimensionMismatch {
            expected: prob.base.dim(),
            got: lambda.len(),
        });
    }
    let w = prob.base.a.matvec(lambda)?;
    Ok(blcp_residual_from_w(lambda, &w, &prob.base.q, &prob.l, &prob.u))
}

pub(crate) fn blcp_residual_from_w(
    lambda: &[f64],
    a_lambda: &[f64],
    q: &[f64],
    l: &[f64],
    u: &[f64],
) -> f64 {
    let diffs: Vec<f64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &li)| {
            let wi = a_lambda[i] + q[i];
            li - (li - wi).clamp(l[i], u[i])
        })
        .collect();
    norm2(&diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn one_by_one() -> LcpProblem {
        LcpProblem::new(DenseMatrix::from_rows(&[vec![2.0]]), vec![-4.0]).unwrap()
    }

    #[test]
    fn residual_is_zero_at_solution() {
        let p = one_by_one();
        assert_eq!(residual(&p, &[2.0]).unwrap(), 0.0);
    }

    #[test]
    fn residual_zero_lambda_nonnegative_q() {
        let p = LcpProblem::new(
            DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
            vec![3.0, 3.0],
        )
        .unwrap();
        assert_eq!(residual(&p, &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn residual_measures_violation() {
        let p = one_by_one();
        assert_eq!(residual(&p, &[0.0]).unwrap(), 4.0);
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 2.0]]);
        assert!(matches!(
            LcpProblem::new(a, vec![0.0, 0.0]),
            Err(LcpError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn boxed_bounds_validated() {
        let p = one_by_one();
        assert!(matches!(
            BoxedLcpProblem::new(p, vec![1.0], vec![1.0]),
            Err(LcpError::InvalidBounds { .. })
        ));
    }

    #[test]
    fn blcp_residual_reduces_to_plain() {
        let p = one_by_one();
        let boxed = BoxedLcpProblem::new(p.clone(), vec![0.0], vec![f64::INFINITY]).unwrap();
        for lam in [[0.0], [1.0], [2.0], [3.5]] {
            let a = residual(&p, &lam).unwrap();
            let b = blcp_residual(&boxed, &lam).unwrap();
            assert_eq!(a, b);
        }
    }
}
