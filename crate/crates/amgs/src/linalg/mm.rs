//! MatrixMarket import/export.
//!
//! Sparse matrices use the coordinate format with 1-based indices; dense
//! matrices and vectors use the array format (column-major, per the format
//! definition). Values are written with 17 significant digits so files
//! round-trip bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{DenseMatrix, LinalgError, SparseMatrix};

const COORD_HEADER: &str = "%%MatrixMarket matrix coordinate real general";
const ARRAY_HEADER: &str = "%%MatrixMarket matrix array real general";

pub(crate) fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, source: std::io::Error) -> LinalgError {
    LinalgError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> LinalgError {
    LinalgError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn parse_f64(path: &Path, token: &str) -> Result<f64, LinalgError> {
    token
        .parse::<f64>()
        .map_err(|_| parse_err(path, format!("bad real value `{token}`")))
}

fn parse_usize(path: &Path, token: &str) -> Result<usize, LinalgError> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(path, format!("bad integer `{token}`")))
}

pub fn write_coordinate(path: &Path, a: &SparseMatrix) -> Result<(), LinalgError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{COORD_HEADER}")?;
        writeln!(w, "{} {} {}", a.rows(), a.cols(), a.nnz())?;
        for (i, j, v) in a.iter_entries() {
            writeln!(w, "{} {} {}", i + 1, j + 1, fmt_real(v))?;
        }
        w.flush()
    };
    body().map_err(|e| io_err(path, e))
}

pub fn read_coordinate(path: &Path) -> Result<SparseMatrix, LinalgError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty file"))?
        .map_err(|e| io_err(path, e))?;
    if !header.trim_end().eq_ignore_ascii_case(COORD_HEADER) {
        return Err(parse_err(path, format!("unexpected header `{header}`")));
    }
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let mut it = t.split_whitespace();
        if dims.is_none() {
            let r = parse_usize(path, it.next().unwrap_or(""))?;
            let c = parse_usize(path, it.next().unwrap_or(""))?;
            let n = parse_usize(path, it.next().unwrap_or(""))?;
            dims = Some((r, c, n));
            continue;
        }
        let i = parse_usize(path, it.next().unwrap_or(""))?;
        let j = parse_usize(path, it.next().unwrap_or(""))?;
        let v = parse_f64(path, it.next().unwrap_or(""))?;
        if i == 0 || j == 0 {
            return Err(parse_err(path, "indices must be 1-based"));
        }
        triplets.push((i - 1, j - 1, v));
    }
    let (rows, cols, nnz) = dims.ok_or_else(|| parse_err(path, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(parse_err(
            path,
            format!("expected {nnz} entries, found {}", triplets.len()),
        ));
    }
    let a = SparseMatrix::from_triplets(rows, cols, &triplets)
        .map_err(|e| parse_err(path, e.to_string()))?;
    Ok(a)
}

/// Writes a dense matrix in array format (column-major). An optional comment
/// line is placed right after the header.
pub fn write_array_matrix(
    path: &Path,
    a: &DenseMatrix,
    comment: Option<&str>,
) -> Result<(), LinalgError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{ARRAY_HEADER}")?;
        if let Some(c) = comment {
            writeln!(w, "% {c}")?;
        }
        writeln!(w, "{} {}", a.rows(), a.cols())?;
        for j in 0..a.cols() {
            for i in 0..a.rows() {
                writeln!(w, "{}", fmt_real(a[(i, j)]))?;
            }
        }
        w.flush()
    };
    body().map_err(|e| io_err(path, e))
}

pub fn read_array_matrix(path: &Path) -> Result<(DenseMatrix, Vec<String>), LinalgError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty file"))?
        .map_err(|e| io_err(path, e))?;
    if !header.trim_end().eq_ignore_ascii_case(ARRAY_HEADER) {
        return Err(parse_err(path, format!("unexpected header `{header}`")));
    }
    let mut comments = Vec::new();
    let mut dims: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    for line in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('%') {
            comments.push(c.trim().to_string());
            continue;
        }
        if dims.is_none() {
            let mut it = t.split_whitespace();
            let r = parse_usize(path, it.next().unwrap_or(""))?;
            let c = parse_usize(path, it.next().unwrap_or(""))?;
            dims = Some((r, c));
            continue;
        }
        for tok in t.split_whitespace() {
            values.push(parse_f64(path, tok)?);
        }
    }
    let (rows, cols) = dims.ok_or_else(|| parse_err(path, "missing size line"))?;
    if values.len() != rows * cols {
        return Err(parse_err(
            path,
            format!("expected {} values, found {}", rows * cols, values.len()),
        ));
    }
    let mut m = DenseMatrix::zeros(rows, cols);
    let mut k = 0;
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = values[k];
            k += 1;
        }
    }
    Ok((m, comments))
}

pub fn write_array_vector(path: &Path, v: &[f64]) -> Result<(), LinalgError> {
    write_array_matrix(path, &DenseMatrix::from_vec(v.len(), 1, v.to_vec()), None)
}

pub fn read_array_vector(path: &Path) -> Result<Vec<f64>, LinalgError> {
    let (m, _) = read_array_matrix(path)?;
    if m.cols() != 1 {
        return Err(parse_err(path, format!("expected a vector, got {} columns", m.cols())));
    }
    Ok(m.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_round_trip() {
        let dir = std::env::temp_dir().join("amgs_mm_coord_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("j.mtx");
        let a = SparseMatrix::from_triplets(
            3,
            4,
            &[(0, 1, -0.1), (1, 3, 123.45678901234567), (2, 0, 1e-300)],
        )
        .unwrap();
        write_coordinate(&path, &a).unwrap();
        let b = read_coordinate(&path).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn array_round_trip_with_comment() {
        let dir = std::env::temp_dir().join("amgs_mm_array_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.mtx");
        let m = DenseMatrix::from_rows(&[vec![1.5, -2.25], vec![0.0, 1.0 / 3.0]]);
        write_array_matrix(&path, &m, Some("blocks: body_count=1 dof_per_body=2")).unwrap();
        let (back, comments) = read_array_matrix(&path).unwrap();
        assert_eq!(m, back);
        assert_eq!(comments.len(), 1);
        assert!(comments[0].contains("body_count=1"));
    }

    #[test]
    fn vector_round_trip_with_infinity() {
        let dir = std::env::temp_dir().join("amgs_mm_vec_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("u.mtx");
        let v = vec![0.0, f64::INFINITY, -1.25];
        write_array_vector(&path, &v).unwrap();
        let back = read_array_vector(&path).unwrap();
        assert_eq!(v, back);
    }
}
