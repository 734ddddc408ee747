use super::{DenseMatrix, LinalgError, SparseMatrix};

/// Triangular decomposition `A = D - L - U` with `D` the diagonal, `L`
/// strictly lower and `U` strictly upper (signs chosen so the splitting
/// pairs of the Gauss-Seidel family read off directly).
#[derive(Debug, Clone)]
pub struct TriangularSplit {
    pub d: Vec<f64>,
    pub l: SparseMatrix,
    pub u: SparseMatrix,
}

impl TriangularSplit {
    /// Rebuilds the source matrix; exact on every stored entry.
    pub fn reconstruct(&self) -> DenseMatrix {
        let m = self.d.len();
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = self.d[i];
        }
        for (i, j, v) in self.l.iter_entries() {
            a[(i, j)] = -v;
        }
        for (i, j, v) in self.u.iter_entries() {
            a[(i, j)] = -v;
        }
        a
    }
}

/// Splits a square matrix with strictly positive diagonal into `D - L - U`.
pub fn split_dlu(a: &DenseMatrix) -> Result<TriangularSplit, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let m = a.rows();
    let mut d = Vec::with_capacity(m);
    for i in 0..m {
        let v = a[(i, i)];
        if !(v > 0.0) {
            return Err(LinalgError::NonPositiveDiagonal { index: i, value: v });
        }
        d.push(v);
    }
    let mut lower: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    let mut upper: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            let v = a[(i, j)];
            if v == 0.0 || i == j {
                continue;
            }
            if j < i {
                lower[i].push((j, -v));
            } else {
                upper[i].push((j, -v));
            }
        }
    }
    Ok(TriangularSplit {
        d,
        l: SparseMatrix::from_rows_sorted(m, m, &lower)?,
        u: SparseMatrix::from_rows_sorted(m, m, &upper)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_and_reconstructs() {
        let a = DenseMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]);
        let s = split_dlu(&a).unwrap();
        assert_eq!(s.d, vec![2.0, 2.0]);
        assert_eq!(s.l.get(1, 0), 1.0);
        assert_eq!(s.u.get(0, 1), 1.0);
        assert_eq!(s.reconstruct(), a);
    }

    #[test]
    fn diagonal_matrix_has_empty_triangles() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 5.0]]);
        let s = split_dlu(&a).unwrap();
        assert_eq!(s.l.nnz(), 0);
        assert_eq!(s.u.nnz(), 0);
    }

    #[test]
    fn zero_diagonal_is_reported_with_index() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 2.0]]);
        match split_dlu(&a) {
            Err(LinalgError::NonPositiveDiagonal { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected diagonal error, got {other:?}"),
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reconstruction_is_bit_exact(
                entries in proptest::collection::vec(-10.0f64..10.0, 36),
                diag in proptest::collection::vec(0.01f64..10.0, 6),
            ) {
                let mut a = DenseMatrix::zeros(6, 6);
                for i in 0..6 {
                    for j in 0..6 {
                        a[(i, j)] = entries[i * 6 + j];
                    }
                    a[(i, i)] = diag[i];
                }
                let split = split_dlu(&a).unwrap();
                prop_assert_eq!(split.reconstruct(), a);
            }
        }
    }
}
