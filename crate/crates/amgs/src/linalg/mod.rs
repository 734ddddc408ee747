//! Small dense/sparse linear algebra kernels used by the solver sweeps.
//!
//! Everything here is deliberately self-contained: deterministic results
//! matter more than peak throughput for the solver comparisons, so the
//! kernels fix their summation order and never reorder work.

mod blockmass;
mod dense;
pub mod mm;
mod norm;
mod sparse;
mod split;

pub use blockmass::{build_mhat, BlockDiagInverseMass};
pub use dense::DenseMatrix;
pub use norm::{spectral_norm, spectral_radius, LinearOp, NormEstimate};
pub use sparse::{spmv, SparseMatrix};
pub use split::{split_dlu, TriangularSplit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-positive diagonal entry {value} at index {index}")]
    NonPositiveDiagonal { index: usize, value: f64 },
    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),
    #[error("singular system at pivot {index}")]
    Singular { index: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

/// Euclidean norm of a vector.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Infinity norm of the difference of two equally long vectors.
pub fn diff_inf(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
