//! Contact problems in factored form and the matrix-free solver sweeps.
//!
//! The coefficient matrix `A = J M⁻¹ Jᵀ` of a contact LCP is dense-ish and
//! expensive to form, but its factors are sparse: `J` has a handful of
//! entries per constraint row and `M⁻¹` is block diagonal. [`ContactLcp`]
//! keeps the factors and precomputes only `M̂ = M⁻¹Jᵀ` and the diagonal of
//! `A`. The sweeps in this module then advance one constraint at a time
//! while carrying the running generalized velocity `v + M̂λ`, so a full
//! pass costs `O(nnz(J))` instead of `O(m²)`.

pub mod certificate;
pub mod io;
mod solver;
pub mod synthetic;

pub use certificate::{alpha_sweep_certificates, certificate, ConvergenceCertificate};
pub use solver::{
    amgs_boxed_solve, amgs_contact_solve, pgs_boxed_contact_solve, pgs_contact_solve,
    ContactSweep, SweepKind, SweepState,
};

use crate::lcp::{LcpError, LcpProblem};
use crate::linalg::{build_mhat, BlockDiagInverseMass, DenseMatrix, LinalgError, SparseMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContactError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lcp(#[from] LcpError),
    #[error("degenerate constraint row {index}: diagonal entry {value}")]
    DegenerateRow { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid bounds at index {index}: l = {l}, u = {u}")]
    InvalidBounds { index: usize, l: f64, u: f64 },
    #[error("missing file {0}")]
    MissingFile(String),
}

/// A contact LCP kept in factored form: `A = J M⁻¹ Jᵀ` and `q = J v + b`
/// are never materialized globally.
///
/// `mhat` is `M̂ = M⁻¹Jᵀ` (n x m); its transpose is kept alongside, giving
/// contiguous access to the column of `M̂` that a constraint update
/// scatters into the velocity accumulator. `adiag[i] = Jᵢ· M̂·ᵢ` is the
/// diagonal of `A`, required strictly positive.
#[derive(Debug, Clone)]
pub struct ContactLcp {
    pub j: SparseMatrix,
    pub minv: BlockDiagInverseMass,
    pub v: Vec<f64>,
    pub b: Vec<f64>,
    pub adiag: Vec<f64>,
    pub mhat: SparseMatrix,
    mhat_cols: SparseMatrix,
}

impl ContactLcp {
    pub fn new(
        j: SparseMatrix,
        minv: BlockDiagInverseMass,
        v: Vec<f64>,
        b: Vec<f64>,
    ) -> Result<Self, ContactError> {
        let n = minv.dim();
        if j.cols() != n {
            return Err(ContactError::DimensionMismatch {
                expected: n,
                got: j.cols(),
            });
        }
        if v.len() != n {
            return Err(ContactError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let m = j.rows();
        if b.len() != m {
            return Err(ContactError::DimensionMismatch {
                expected: m,
                got: b.len(),
            });
        }
        let mhat = build_mhat(&j, &minv)?;
        let mhat_cols = mhat.transpose();
        let mut adiag = vec![0.0; m];
        for (i, slot) in adiag.iter_mut().enumerate() {
            let (cols, vals) = j.row(i);
            let mut s = 0.0;
            for (&k, &jv) in cols.iter().zip(vals) {
                s += jv * mhat.get(k, i);
            }
            *slot = s;
            if !(s > 0.0) {
                return Err(ContactError::DegenerateRow { index: i, value: s });
            }
        }
        Ok(Self {
            j,
            minv,
            v,
            b,
            adiag,
            mhat,
            mhat_cols,
        })
    }

    /// Constraint count `m`.
    pub fn constraints(&self) -> usize {
        self.j.rows()
    }

    /// Generalized velocity dimension `n`.
    pub fn dofs(&self) -> usize {
        self.j.cols()
    }

    /// Column `i` of `M̂` as a sparse (dof index, value) list.
    pub fn mhat_column(&self, i: usize) -> (&[usize], &[f64]) {
        self.mhat_cols.row(i)
    }

    /// Recomputes `adiag[i]` from the factors; used by invariant checks.
    pub fn recompute_diag(&self, i: usize) -> f64 {
        let (cols, vals) = self.j.row(i);
        let mut s = 0.0;
        for (&k, &jv) in cols.iter().zip(vals) {
            s += jv * self.mhat.get(k, i);
        }
        s
    }

    /// Materializes the dense problem `A = J M̂`, `q = J v + b`.
    ///
    /// The entry sums run over the row pattern of `J` in index order, so
    /// the densified diagonal is bit-identical to `adiag` and the dense
    /// sweep divides by exactly the numbers the factored sweep divides by.
    pub fn densify(&self) -> Result<LcpProblem, ContactError> {
        let m = self.constraints();
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m {
            let (cols, vals) = self.j.row(i);
            for jcol in 0..m {
                let mut s = 0.0;
                for (&k, &jv) in cols.iter().zip(vals) {
                    s += jv * self.mhat.get(k, jcol);
                }
                a[(i, jcol)] = s;
            }
        }
        // A is symmetric in exact arithmetic but the two triangles are
        // accumulated along different patterns; mirror the upper triangle
        // so the stored matrix is symmetric bit-exactly.
        for i in 0..m {
            for jcol in i + 1..m {
                a[(jcol, i)] = a[(i, jcol)];
            }
        }
        let jv = self.j.spmv(&self.v)?;
        let q: Vec<f64> = jv.iter().zip(&self.b).map(|(a, b)| a + b).collect();
        Ok(LcpProblem::new(a, q)?)
    }

    /// Applies the impulse `λ` to a velocity vector: `v + M̂ λ`.
    pub fn apply_impulses(&self, v: &[f64], lambda: &[f64]) -> Result<Vec<f64>, ContactError> {
        if lambda.len() != self.constraints() {
            return Err(ContactError::DimensionMismatch {
                expected: self.constraints(),
                got: lambda.len(),
            });
        }
        let mut out = v.to_vec();
        let push = self.mhat.spmv(lambda)?;
        for (o, p) in out.iter_mut().zip(&push) {
            *o += p;
        }
        Ok(out)
    }
}

/// Element-wise projection onto the box `[l, u]`.
pub fn p_blcp(x: &[f64], l: &[f64], u: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), l.len());
    debug_assert_eq!(x.len(), u.len());
    x.iter()
        .enumerate()
        .map(|(i, &v)| v.clamp(l[i], u[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_contact() -> ContactLcp {
        // one dynamic circle resting on a static floor; only the circle's
        // dofs carry J entries
        let j = SparseMatrix::from_triplets(1, 3, &[(0, 1, 1.0)]).unwrap();
        let minv = BlockDiagInverseMass::from_planar_bodies(&[(1.0, 2.0)]);
        ContactLcp::new(j, minv, vec![0.0, -1.0, 0.0], vec![0.0]).unwrap()
    }

    #[test]
    fn diagonal_and_densify_agree() {
        let prob = single_contact();
        assert_eq!(prob.adiag, vec![1.0]);
        let dense = prob.densify().unwrap();
        assert_eq!(dense.a()[(0, 0)], 1.0);
        assert_eq!(dense.q(), &[-1.0]);
        assert_eq!(prob.recompute_diag(0), prob.adiag[0]);
    }

    #[test]
    fn degenerate_row_is_reported() {
        // a constraint touching only a static body has a zero diagonal
        let j = SparseMatrix::from_triplets(1, 3, &[(0, 1, 1.0)]).unwrap();
        let minv = BlockDiagInverseMass::from_planar_bodies(&[(0.0, 0.0)]);
        match ContactLcp::new(j, minv, vec![0.0; 3], vec![0.0]) {
            Err(ContactError::DegenerateRow { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected degenerate row, got {other:?}"),
        }
    }

    #[test]
    fn projection_clamps() {
        assert_eq!(p_blcp(&[2.0], &[0.0], &[1.0]), vec![1.0]);
        assert_eq!(p_blcp(&[-1.0], &[0.0], &[1.0]), vec![0.0]);
        let inside = vec![0.25, 0.75];
        assert_eq!(p_blcp(&inside, &[0.0, 0.0], &[1.0, 1.0]), inside);
    }
}
