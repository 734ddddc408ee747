use super::{
    blcp_residual_from_w, residual_from_w, BoxedLcpProblem, LcpError, LcpProblem, Solution,
    SolverConfig,
};

/// Projected Gauss-Seidel.
///
/// Sweeps the components in ascending index order, clamping each update to
/// the nonnegative orthant:
/// `λᵢ ← max{0, λᵢ - ((Aλ)ᵢ + qᵢ) / Aᵢᵢ}` with `(Aλ)ᵢ` evaluated on the
/// mixed iterate (already-updated entries for `j < i`). Stops when the
/// residual drops strictly below `cfg.residual_tol` or the sweep budget is
/// exhausted; running out of budget is reported via `converged`, not as an
/// error.
pub fn pgs_solve(
    prob: &LcpProblem,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    sweep(prob, lambda0, cfg, None)
}

/// Projected Gauss-Seidel with box bounds, the friction-capable variant.
pub fn pgs_boxed_solve(
    prob: &BoxedLcpProblem,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    sweep(&prob.base, lambda0, cfg, Some((&prob.l, &prob.u)))
}

fn sweep(
    prob: &LcpProblem,
    lambda0: &[f64],
    cfg: &SolverConfig,
    bounds: Option<(&[f64], &[f64])>,
) -> Result<Solution, LcpError> {
    cfg.validate()?;
    let m = prob.dim();
    if lambda0.len() != m {
        return Err(LcpError::DimensionMismatch {
            expected: m,
            got: lambda0.len(),
        });
    }
    let a = prob.a();
    let q = prob.q();
    let clamp = |i: usize, v: f64| -> f64 {
        match bounds {
            None => v.max(0.0),
            Some((l, u)) => v.clamp(l[i], u[i]),
        }
    };
    let mut lambda: Vec<f64> = lambda0
        .iter()
        .enumerate()
        .map(|(i, &v)| clamp(i, v))
        .collect();
    let mut history = Vec::new();
    let mut work = 0u64;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.max_iterations {
        for i in 0..m {
            let row = a.row(i);
            let mut s = q[i];
            for (j, &v) in row.iter().enumerate() {
                s += v * lambda[j];
            }
            work += m as u64;
            lambda[i] = clamp(i, lambda[i] - s / row[i]);
        }
        iterations += 1;
        let a_lambda = a.matvec(&lambda)?;
        work += (m * m) as u64;
        let res = match bounds {
            None => residual_from_w(&lambda, &a_lambda, q),
            Some((l, u)) => blcp_residual_from_w(&lambda, &a_lambda, q, l, u),
        };
        if cfg.record_history {
            history.push(res);
        }
        if res < cfg.residual_tol {
            converged = true;
            break;
        }
    }
    let w: Vec<f64> = a
        .matvec(&lambda)?
        .iter()
        .zip(q)
        .map(|(al, qi)| al + qi)
        .collect();
    Ok(Solution {
        lambda,
        w,
        iterations,
        residual_history: history,
        converged,
        modulus: None,
        work,
    })
}
