use super::{LinalgError, SparseMatrix};

/// Block-diagonal inverse mass matrix, one `dof x dof` block per body.
///
/// The inverse is stored directly: static bodies carry the zero block, so
/// walls and floors never make the system singular and no per-body inversion
/// happens during stepping. Blocks must be symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagInverseMass {
    dof_per_body: usize,
    // row-major dof x dof block per body
    inv_blocks: Vec<Vec<f64>>,
}

impl BlockDiagInverseMass {
    pub fn new(dof_per_body: usize, inv_blocks: Vec<Vec<f64>>) -> Result<Self, LinalgError> {
        let d = dof_per_body;
        for (i, b) in inv_blocks.iter().enumerate() {
            if b.len() != d * d {
                return Err(LinalgError::InvalidStructure(format!(
                    "block {i} has {} entries, expected {}",
                    b.len(),
                    d * d
                )));
            }
        }
        Ok(Self {
            dof_per_body,
            inv_blocks,
        })
    }

    /// Convenience for 2D bodies: diagonal block `(1/m, 1/m, 1/I)`.
    pub fn from_planar_bodies(bodies: &[(f64, f64)]) -> Self {
        let blocks = bodies
            .iter()
            .map(|&(inv_mass, inv_inertia)| {
                vec![
                    inv_mass, 0.0, 0.0, //
                    0.0, inv_mass, 0.0, //
                    0.0, 0.0, inv_inertia,
                ]
            })
            .collect();
        Self {
            dof_per_body: 3,
            inv_blocks: blocks,
        }
    }

    pub fn body_count(&self) -> usize {
        self.inv_blocks.len()
    }

    pub fn dof_per_body(&self) -> usize {
        self.dof_per_body
    }

    /// Total dimension `n = body_count * dof_per_body`.
    pub fn dim(&self) -> usize {
        self.inv_blocks.len() * self.dof_per_body
    }

    pub fn block(&self, body: usize) -> &[f64] {
        &self.inv_blocks[body]
    }

    pub fn is_static(&self, body: usize) -> bool {
        self.inv_blocks[body].iter().all(|&v| v == 0.0)
    }

    /// `y = M⁻¹ x` applied block by block.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let d = self.dof_per_body;
        let mut y = vec![0.0; x.len()];
        for (body, block) in self.inv_blocks.iter().enumerate() {
            let base = body * d;
            for r in 0..d {
                let mut s = 0.0;
                for c in 0..d {
                    s += block[r * d + c] * x[base + c];
                }
                y[base + r] = s;
            }
        }
        Ok(y)
    }

    pub fn to_dense(&self) -> super::DenseMatrix {
        let n = self.dim();
        let d = self.dof_per_body;
        let mut m = super::DenseMatrix::zeros(n, n);
        for (body, block) in self.inv_blocks.iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    m[(body * d + r, body * d + c)] = block[r * d + c];
                }
            }
        }
        m
    }
}

/// Builds `M̂ = M⁻¹ Jᵀ` (size n x m) in compressed form.
///
/// Each column of `M̂` is the generalized velocity change produced by a unit
/// impulse on one constraint row, so `nnz(M̂) <= dof_per_body * nnz(J)`.
pub fn build_mhat(
    j: &SparseMatrix,
    minv: &BlockDiagInverseMass,
) -> Result<SparseMatrix, LinalgError> {
    let n = minv.dim();
    if j.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: j.cols(),
        });
    }
    let d = minv.dof_per_body();
    let jt = j.transpose(); // n x m, rows sorted by constraint index
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for body in 0..minv.body_count() {
        let base = body * d;
        let block = minv.block(body);
        // Union of the constraint columns touching this body, in order.
        let mut merged: Vec<usize> = Vec::new();
        for local in 0..d {
            let (cols, _) = jt.row(base + local);
            for &c in cols {
                merged.push(c);
            }
        }
        merged.sort_unstable();
        merged.dedup();
        for local in 0..d {
            let mut entries = Vec::with_capacity(merged.len());
            for &constraint in &merged {
                let mut s = 0.0;
                for l in 0..d {
                    let coeff = block[local * d + l];
                    if coeff != 0.0 {
                        s += coeff * jt.get(base + l, constraint);
                    }
                }
                if s != 0.0 {
                    entries.push((constraint, s));
                }
            }
            rows.push(entries);
        }
    }
    SparseMatrix::from_rows_sorted(n, j.rows(), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn dense_mhat(j: &SparseMatrix, minv: &BlockDiagInverseMass) -> DenseMatrix {
        minv.to_dense().mul(&j.to_dense().transpose()).unwrap()
    }

    #[test]
    fn single_body_column() {
        let j = SparseMatrix::from_triplets(1, 3, &[(0, 1, -1.0)]).unwrap();
        let minv = BlockDiagInverseMass::from_planar_bodies(&[(0.5, 7.0)]);
        let mhat = build_mhat(&j, &minv).unwrap();
        assert_eq!(mhat.rows(), 3);
        assert_eq!(mhat.cols(), 1);
        assert_eq!(mhat.get(0, 0), 0.0);
        assert_eq!(mhat.get(1, 0), -0.5);
        assert_eq!(mhat.get(2, 0), 0.0);
    }

    #[test]
    fn static_bodies_give_zero_matrix() {
        let j = SparseMatrix::from_triplets(2, 6, &[(0, 0, 1.0), (1, 4, -2.0)]).unwrap();
        let minv = BlockDiagInverseMass::from_planar_bodies(&[(0.0, 0.0), (0.0, 0.0)]);
        let mhat = build_mhat(&j, &minv).unwrap();
        assert_eq!(mhat.nnz(), 0);
    }

    #[test]
    fn matches_dense_product_and_nnz_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (m, bodies) = (10usize, 4usize);
        let n = bodies * 3;
        let mut trips = Vec::new();
        for i in 0..m {
            for _ in 0..3 {
                let c = rng.random_range(0..n);
                trips.push((i, c, rng.random_range(-1.0..1.0)));
            }
        }
        let j = SparseMatrix::from_triplets(m, n, &trips).unwrap();
        let specs: Vec<(f64, f64)> = (0..bodies)
            .map(|_| (rng.random_range(0.1..2.0), rng.random_range(0.1..2.0)))
            .collect();
        let minv = BlockDiagInverseMass::from_planar_bodies(&specs);
        let mhat = build_mhat(&j, &minv).unwrap();
        mhat.check_invariants().unwrap();
        let reference = dense_mhat(&j, &minv);
        assert!(mhat.to_dense().sub(&reference).max_abs() < 1e-14);
        assert!(mhat.nnz() <= 3 * j.nnz());
    }
}
