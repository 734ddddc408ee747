//! On-disk form of dense problems and residual histories.
//!
//! A problem directory holds `a.mtx` (dense array form) and `q.mtx`,
//! plus `l.mtx`/`u.mtx` when the problem is boxed. Residual histories go
//! to CSV as `iter,residual` with 17 significant digits.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{BoxedLcpProblem, LcpError, LcpProblem};
use crate::linalg::mm::{self, fmt_real};
use crate::linalg::LinalgError;

/// Lower/upper bound vectors of a boxed problem.
pub type BoundsPair = (Vec<f64>, Vec<f64>);

pub fn save_problem(dir: &Path, prob: &LcpProblem) -> Result<(), LcpError> {
    std::fs::create_dir_all(dir).map_err(|e| wrap_io(dir, e))?;
    mm::write_array_matrix(&dir.join("a.mtx"), prob.a(), None)?;
    mm::write_array_vector(&dir.join("q.mtx"), prob.q())?;
    Ok(())
}

pub fn save_boxed_problem(dir: &Path, prob: &BoxedLcpProblem) -> Result<(), LcpError> {
    save_problem(dir, &prob.base)?;
    mm::write_array_vector(&dir.join("l.mtx"), &prob.l)?;
    mm::write_array_vector(&dir.join("u.mtx"), &prob.u)?;
    Ok(())
}

pub fn load_problem(dir: &Path) -> Result<LcpProblem, LcpError> {
    let (a, _) = mm::read_array_matrix(&dir.join("a.mtx"))?;
    let q = mm::read_array_vector(&dir.join("q.mtx"))?;
    LcpProblem::new(a, q)
}

/// Loads a problem directory; bounds are returned when both bound files
/// are present.
pub fn load_maybe_boxed(dir: &Path) -> Result<(LcpProblem, Option<BoundsPair>), LcpError> {
    let prob = load_problem(dir)?;
    let l_path = dir.join("l.mtx");
    let u_path = dir.join("u.mtx");
    if l_path.exists() && u_path.exists() {
        let l = mm::read_array_vector(&l_path)?;
        let u = mm::read_array_vector(&u_path)?;
        Ok((prob, Some((l, u))))
    } else {
        Ok((prob, None))
    }
}

/// Writes `iter,residual` rows, one per recorded sweep (1-based).
pub fn write_residual_csv(path: &Path, history: &[f64]) -> Result<(), LcpError> {
    let file = File::create(path).map_err(|e| wrap_io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "iter,residual")?;
        for (k, res) in history.iter().enumerate() {
            writeln!(w, "{},{}", k + 1, fmt_real(*res))?;
        }
        w.flush()
    };
    body().map_err(|e| wrap_io(path, e))
}

pub fn read_residual_csv(path: &Path) -> Result<Vec<f64>, LcpError> {
    let file = File::open(path).map_err(|e| wrap_io(path, e))?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| wrap_io(path, e))?;
        if n == 0 {
            continue; // header
        }
        let mut it = line.split(',');
        let _iter = it.next();
        let value = it.next().ok_or_else(|| {
            LcpError::Linalg(LinalgError::Parse {
                path: path.display().to_string(),
                message: format!("missing residual column on line {}", n + 1),
            })
        })?;
        let v: f64 = value.trim().parse().map_err(|_| {
            LcpError::Linalg(LinalgError::Parse {
                path: path.display().to_string(),
                message: format!("bad residual `{value}`"),
            })
        })?;
        out.push(v);
    }
    Ok(out)
}

fn wrap_io(path: &Path, e: std::io::Error) -> LcpError {
    LcpError::Linalg(LinalgError::Io {
        path: path.display().to_string(),
        source: e,
    })
}
