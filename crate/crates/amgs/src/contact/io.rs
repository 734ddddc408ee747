//! On-disk form of factored contact problems.
//!
//! A problem directory holds `j.mtx` (coordinate format), `minv.mtx` (the
//! inverse-mass blocks concatenated body-major as one dense array column),
//! `v.mtx` and `b.mtx`, plus `l.mtx`/`u.mtx` when bounds are present.

use std::path::Path;

use super::{ContactError, ContactLcp};
use crate::linalg::mm;
use crate::linalg::{BlockDiagInverseMass, DenseMatrix};

const MINV_FILE: &str = "minv.mtx";

pub fn save_contact_problem(
    dir: &Path,
    prob: &ContactLcp,
    bounds: Option<(&[f64], &[f64])>,
) -> Result<(), ContactError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        ContactError::Linalg(crate::linalg::LinalgError::Io {
            path: dir.display().to_string(),
            source: e,
        })
    })?;
    mm::write_coordinate(&dir.join("j.mtx"), &prob.j)?;
    let d = prob.minv.dof_per_body();
    let bodies = prob.minv.body_count();
    let mut blocks = Vec::with_capacity(bodies * d * d);
    for body in 0..bodies {
        // each block stored column-major, bodies concatenated in order
        let block = prob.minv.block(body);
        for c in 0..d {
            for r in 0..d {
                blocks.push(block[r * d + c]);
            }
        }
    }
    mm::write_array_matrix(
        &dir.join(MINV_FILE),
        &DenseMatrix::from_vec(blocks.len(), 1, blocks),
        Some(&format!("blocks: body_count={bodies} dof_per_body={d}")),
    )?;
    mm::write_array_vector(&dir.join("v.mtx"), &prob.v)?;
    mm::write_array_vector(&dir.join("b.mtx"), &prob.b)?;
    if let Some((l, u)) = bounds {
        mm::write_array_vector(&dir.join("l.mtx"), l)?;
        mm::write_array_vector(&dir.join("u.mtx"), u)?;
    }
    Ok(())
}

pub fn load_contact_problem(
    dir: &Path,
) -> Result<(ContactLcp, Option<crate::lcp::io::BoundsPair>), ContactError> {
    let j = mm::read_coordinate(&dir.join("j.mtx"))?;
    let (blocks, comments) = mm::read_array_matrix(&dir.join(MINV_FILE))?;
    let meta = comments
        .iter()
        .find(|c| c.starts_with("blocks:"))
        .ok_or_else(|| ContactError::MissingFile(format!("{MINV_FILE} block metadata")))?;
    let mut body_count = None;
    let mut dof = None;
    for token in meta.split_whitespace() {
        if let Some(v) = token.strip_prefix("body_count=") {
            body_count = v.parse::<usize>().ok();
        }
        if let Some(v) = token.strip_prefix("dof_per_body=") {
            dof = v.parse::<usize>().ok();
        }
    }
    let (bodies, d) = match (body_count, dof) {
        (Some(b), Some(d)) => (b, d),
        _ => {
            return Err(ContactError::MissingFile(format!(
                "{MINV_FILE} block metadata"
            )))
        }
    };
    let data = blocks.data();
    if data.len() != bodies * d * d {
        return Err(ContactError::DimensionMismatch {
            expected: bodies * d * d,
            got: data.len(),
        });
    }
    let mut inv_blocks = Vec::with_capacity(bodies);
    for body in 0..bodies {
        let base = body * d * d;
        let mut block = vec![0.0; d * d];
        for c in 0..d {
            for r in 0..d {
                block[r * d + c] = data[base + c * d + r];
            }
        }
        inv_blocks.push(block);
    }
    let minv = BlockDiagInverseMass::new(d, inv_blocks)?;
    let v = mm::read_array_vector(&dir.join("v.mtx"))?;
    let b = mm::read_array_vector(&dir.join("b.mtx"))?;
    let prob = ContactLcp::new(j, minv, v, b)?;
    let l_path = dir.join("l.mtx");
    let u_path = dir.join("u.mtx");
    let bounds = if l_path.exists() && u_path.exists() {
        Some((
            mm::read_array_vector(&l_path)?,
            mm::read_array_vector(&u_path)?,
        ))
    } else {
        None
    };
    Ok((prob, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseMatrix;

    #[test]
    fn contact_problem_round_trip() {
        let dir = std::env::temp_dir().join("amgs_contact_io_test");
        let _ = std::fs::remove_dir_all(&dir);
        let j = SparseMatrix::from_triplets(
            2,
            6,
            &[(0, 1, 1.0), (0, 4, -1.0), (1, 0, 0.5), (1, 2, -0.25)],
        )
        .unwrap();
        let minv = BlockDiagInverseMass::from_planar_bodies(&[(0.5, 4.0), (1.0, 8.0)]);
        let prob = ContactLcp::new(
            j,
            minv,
            vec![0.1, -0.2, 0.3, -0.4, 0.5, -0.6],
            vec![0.0, -0.05],
        )
        .unwrap();
        let l = vec![-0.5, 0.0];
        let u = vec![0.5, f64::INFINITY];
        save_contact_problem(&dir, &prob, Some((&l, &u))).unwrap();
        let (back, bounds) = load_contact_problem(&dir).unwrap();
        assert_eq!(back.j, prob.j);
        assert_eq!(back.minv, prob.minv);
        assert_eq!(back.v, prob.v);
        assert_eq!(back.b, prob.b);
        assert_eq!(back.adiag, prob.adiag);
        let (bl, bu) = bounds.unwrap();
        assert_eq!(bl, l);
        assert_eq!(bu, u);
    }
}
