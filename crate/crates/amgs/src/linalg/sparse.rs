use super::{DenseMatrix, LinalgError};

/// Compressed sparse row matrix.
///
/// Invariants held after construction:
/// - `row_offsets` has length `rows + 1`, is non-decreasing, and ends at
///   `values.len()`;
/// - column indices are strictly increasing within each row and `< cols`;
/// - no explicitly stored zeros (exact zeros are pruned at build time,
///   with no drop tolerance beyond that).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_offsets: vec![0; rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Builds from (row, col, value) triplets. Duplicate positions are summed;
    /// entries that end up exactly zero are pruned.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self, LinalgError> {
        for &(r, c, _) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::InvalidStructure(format!(
                    "entry ({r}, {c}) out of bounds for {rows}x{cols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0usize; rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let (r, c, mut v) = sorted[i];
            i += 1;
            while i < sorted.len() && sorted[i].0 == r && sorted[i].1 == c {
                v += sorted[i].2;
                i += 1;
            }
            if v != 0.0 {
                row_offsets[r + 1] += 1;
                col_indices.push(c);
                values.push(v);
            }
        }
        for r in 0..rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Ok(Self {
            rows,
            cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds from per-row (col, value) lists with strictly increasing columns.
    /// Exact zeros are pruned.
    pub fn from_rows_sorted(
        rows: usize,
        cols: usize,
        row_entries: &[Vec<(usize, f64)>],
    ) -> Result<Self, LinalgError> {
        if row_entries.len() != rows {
            return Err(LinalgError::DimensionMismatch {
                expected: rows,
                got: row_entries.len(),
            });
        }
        let mut row_offsets = Vec::with_capacity(rows + 1);
        row_offsets.push(0);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        for entries in row_entries {
            let mut last: Option<usize> = None;
            for &(c, v) in entries {
                if c >= cols {
                    return Err(LinalgError::InvalidStructure(format!(
                        "column {c} out of bounds for {cols}"
                    )));
                }
                if let Some(p) = last {
                    if c <= p {
                        return Err(LinalgError::InvalidStructure(
                            "columns not strictly increasing".into(),
                        ));
                    }
                }
                last = Some(c);
                if v != 0.0 {
                    col_indices.push(c);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            rows,
            cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            rows.push(
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(j, &v)| (j, v))
                    .collect(),
            );
        }
        Self::from_rows_sorted(m.rows(), m.cols(), &rows).expect("dense rows are sorted")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&c, &v)| (i, c, v))
        })
    }

    /// Matrix-vector product `self * x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.rows];
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut s = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                s += v * x[*c];
            }
            *yi = s;
        }
        Ok(y)
    }

    /// Transposed product `selfᵀ * x`.
    pub fn spmv_transpose(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                y[*c] += v * xi;
            }
        }
        Ok(y)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = counts.clone();
        for (i, c, v) in self.iter_entries() {
            let slot = next[c];
            col_indices[slot] = i;
            values[slot] = v;
            next[c] += 1;
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// Validates the CSR invariants; used by tests and file import.
    pub fn check_invariants(&self) -> Result<(), LinalgError> {
        if self.row_offsets.len() != self.rows + 1 {
            return Err(LinalgError::InvalidStructure("bad row_offsets length".into()));
        }
        if *self.row_offsets.last().unwrap() != self.values.len()
            || self.col_indices.len() != self.values.len()
        {
            return Err(LinalgError::InvalidStructure("bad nnz bookkeeping".into()));
        }
        for i in 0..self.rows {
            if self.row_offsets[i] > self.row_offsets[i + 1] {
                return Err(LinalgError::InvalidStructure("offsets decrease".into()));
            }
            let (cols, vals) = self.row(i);
            for w in cols.windows(2) {
                if w[0] >= w[1] {
                    return Err(LinalgError::InvalidStructure(
                        "columns not strictly increasing".into(),
                    ));
                }
            }
            if cols.iter().any(|&c| c >= self.cols) {
                return Err(LinalgError::InvalidStructure("column out of range".into()));
            }
            if vals.contains(&0.0) {
                return Err(LinalgError::InvalidStructure("stored zero entry".into()));
            }
        }
        Ok(())
    }
}

/// Sparse matrix-vector product as a free function.
pub fn spmv(a: &SparseMatrix, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
    a.spmv(x)
}
