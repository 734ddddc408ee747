//! Synthetic problem generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ContactLcp;
use crate::lcp::LcpProblem;
use crate::linalg::{BlockDiagInverseMass, DenseMatrix, SparseMatrix};

/// Random pile-like contact problem: every constraint couples one or two
/// dynamic planar bodies through a unit normal at random arm offsets, so
/// the factored structure (6 nonzeros per row, block-diagonal inverse
/// mass) matches what a simulation assembles.
pub fn random_contact_problem(bodies: usize, contacts: usize, seed: u64) -> ContactLcp {
    assert!(bodies >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = bodies * 3;
    let specs: Vec<(f64, f64)> = (0..bodies)
        .map(|_| {
            let mass: f64 = rng.random_range(0.5..3.0);
            let inertia: f64 = rng.random_range(0.02..0.5);
            (1.0 / mass, 1.0 / inertia)
        })
        .collect();
    let minv = BlockDiagInverseMass::from_planar_bodies(&specs);
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(contacts);
    for _ in 0..contacts {
        let a = rng.random_range(0..bodies);
        let against_static = bodies > 1 && rng.random_range(0..5) == 0;
        let b = if against_static {
            a
        } else {
            let mut b = rng.random_range(0..bodies);
            while b == a {
                b = rng.random_range(0..bodies);
            }
            b
        };
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (nx, ny) = (angle.cos(), angle.sin());
        let ra: f64 = rng.random_range(-0.5..0.5);
        let rb: f64 = rng.random_range(-0.5..0.5);
        let mut entries = vec![(a * 3, -nx), (a * 3 + 1, -ny), (a * 3 + 2, ra)];
        if b != a {
            entries.extend_from_slice(&[(b * 3, nx), (b * 3 + 1, ny), (b * 3 + 2, rb)]);
        }
        entries.sort_by_key(|&(c, _)| c);
        rows.push(entries);
    }
    let j = SparseMatrix::from_rows_sorted(contacts, n, &rows).unwrap();
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..contacts).map(|_| rng.random_range(-0.2..0.2)).collect();
    ContactLcp::new(j, minv, v, b).expect("random rows touch dynamic bodies")
}

/// Random symmetric positive definite problem: entries uniform in
/// `[-1, 1]`, symmetrized, diagonal shifted by `m` to force definiteness.
pub fn random_spd_lcp(m: usize, rng: &mut impl Rng) -> LcpProblem {
    let mut a = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = rng.random_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
        a[(i, i)] += m as f64;
    }
    let q = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    LcpProblem::new(a, q).unwrap()
}

/// Factors a dense SPD problem into contact form: `J = Rᵀ` from the
/// Cholesky factor, a single body with an identity inverse-mass block,
/// `v = 0` and `b = q`, so `J M⁻¹ Jᵀ = A` and `Jv + b = q`.
pub fn factor_as_contact(prob: &LcpProblem) -> ContactLcp {
    let m = prob.dim();
    let r = prob.a().cholesky_upper().expect("matrix must be SPD");
    let j = SparseMatrix::from_dense(&r.transpose());
    let mut block = vec![0.0; m * m];
    for i in 0..m {
        block[i * m + i] = 1.0;
    }
    let minv = BlockDiagInverseMass::new(m, vec![block]).unwrap();
    ContactLcp::new(j, minv, vec![0.0; m], prob.q().to_vec()).expect("SPD diag is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factored_form_reproduces_the_dense_problem() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for m in [1usize, 3, 6, 8] {
            let prob = random_spd_lcp(m, &mut rng);
            let contact = factor_as_contact(&prob);
            let dense = contact.densify().unwrap();
            let gap = dense.a().sub(prob.a()).max_abs();
            assert!(gap <= 1e-12, "m={m}: gap {gap}");
            for (a, b) in dense.q().iter().zip(prob.q()) {
                assert_eq!(a, b);
            }
        }
    }
}
