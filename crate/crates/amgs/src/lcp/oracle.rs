use super::{residual, LcpError, LcpProblem, Solution};
use crate::linalg::DenseMatrix;

const ORACLE_LIMIT: usize = 12;
const FEASIBILITY_TOL: f64 = 1e-12;

/// Reference solver by exhaustive complementary active-set enumeration.
///
/// For every subset `S` of the constraints it solves `A_SS λ_S = -q_S`
/// with `λ` zero elsewhere and accepts the first assignment that is
/// feasible to `1e-12`. Exponential in `m`, so it is capped at `m ≤ 12`;
/// it exists to pin the iterative solvers down in tests, not to be fast.
pub fn oracle_solve(prob: &LcpProblem) -> Result<Solution, LcpError> {
    let m = prob.dim();
    if m > ORACLE_LIMIT {
        return Err(LcpError::TooLarge {
            m,
            limit: ORACLE_LIMIT,
        });
    }
    if !prob.a().is_positive_definite() {
        return Err(LcpError::NoFeasibleBasis);
    }
    let a = prob.a();
    let q = prob.q();
    for mask in 0u32..(1u32 << m) {
        let active: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mut lambda = vec![0.0; m];
        if !active.is_empty() {
            let k = active.len();
            let mut sub = DenseMatrix::zeros(k, k);
            let mut rhs = vec![0.0; k];
            for (r, &i) in active.iter().enumerate() {
                rhs[r] = -q[i];
                for (c, &j) in active.iter().enumerate() {
                    sub[(r, c)] = a[(i, j)];
                }
            }
            let sol = match sub.solve(&rhs) {
                Ok(s) => s,
                Err(_) => continue,
            };
            for (r, &i) in active.iter().enumerate() {
                lambda[i] = sol[r];
            }
        }
        if lambda.iter().any(|&v| v < -FEASIBILITY_TOL) {
            continue;
        }
        let w: Vec<f64> = a
            .matvec(&lambda)?
            .iter()
            .zip(q)
            .map(|(al, qi)| al + qi)
            .collect();
        if w.iter().any(|&v| v < -FEASIBILITY_TOL) {
            continue;
        }
        let res = residual(prob, &lambda)?;
        if res <= 1e-9 {
            return Ok(Solution {
                lambda,
                w,
                iterations: 0,
                residual_history: Vec::new(),
                converged: true,
                modulus: None,
                work: 0,
            });
        }
    }
    Err(LcpError::NoFeasibleBasis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    #[test]
    fn scalar_closed_form() {
        let p = LcpProblem::new(DenseMatrix::from_rows(&[vec![2.0]]), vec![-4.0]).unwrap();
        let s = oracle_solve(&p).unwrap();
        assert_eq!(s.lambda, vec![2.0]);
        assert_eq!(s.w, vec![0.0]);
    }

    #[test]
    fn nonnegative_q_gives_zero_impulse() {
        let p = LcpProblem::new(
            DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
            vec![3.0, 3.0],
        )
        .unwrap();
        let s = oracle_solve(&p).unwrap();
        assert_eq!(s.lambda, vec![0.0, 0.0]);
        assert_eq!(s.w, vec![3.0, 3.0]);
    }

    #[test]
    fn fully_active_case() {
        let p = LcpProblem::new(
            DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
            vec![-3.0, -3.0],
        )
        .unwrap();
        let s = oracle_solve(&p).unwrap();
        assert!((s.lambda[0] - 1.0).abs() < 1e-12);
        assert!((s.lambda[1] - 1.0).abs() < 1e-12);
        assert!(s.w.iter().all(|&w| w.abs() < 1e-12));
    }

    #[test]
    fn size_cap_enforced() {
        let n = 13;
        let mut a = DenseMatrix::identity(n);
        for i in 0..n {
            a[(i, i)] = 2.0;
        }
        let p = LcpProblem::new(a, vec![-1.0; n]).unwrap();
        assert!(matches!(oracle_solve(&p), Err(LcpError::TooLarge { .. })));
    }
}
