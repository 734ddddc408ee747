use super::{residual_from_w, LcpError, LcpProblem, ResolvedOmega, Solution, SolverConfig};
use crate::linalg::DenseMatrix;

/// Classic splittings of `A = D - L - U` for the modulus-based family.
///
/// The one-splitting presets (`Mj`, `Mgs`, `Msor`, `Maor`) drive the plain
/// matrix-splitting iteration; the two-splitting presets (`Mmsim`, `Amj`,
/// `Amgs`, `Amsor`, `Amaor`) drive the accelerated form, which feeds the
/// updated `|x|` of earlier components back into the same sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplittingPreset {
    /// `M₀ = D`
    Mj,
    /// `M₀ = D - L`
    Mgs,
    /// `M₀ = D/α - L`
    Msor { alpha: f64 },
    /// `M₀ = (D - βL)/α`
    Maor { alpha: f64, beta: f64 },
    /// Accelerated form degenerated by `M₂ = A`, `N₂ = 0`; the first
    /// splitting is Gauss-Seidel (`M₁ = D - L`).
    Mmsim,
    /// `M₁ = D`, `M₂ = D - U`
    Amj,
    /// `M₁ = D - L`, `M₂ = D - U`
    Amgs,
    /// `M₁ = D/α - L`, `M₂ = D - U`
    Amsor { alpha: f64 },
    /// `M₁ = (D - βL)/α`, `M₂ = D - U`
    Amaor { alpha: f64, beta: f64 },
}

impl SplittingPreset {
    pub fn is_accelerated(&self) -> bool {
        matches!(
            self,
            SplittingPreset::Mmsim
                | SplittingPreset::Amj
                | SplittingPreset::Amgs
                | SplittingPreset::Amsor { .. }
                | SplittingPreset::Amaor { .. }
        )
    }

    pub fn name(&self) -> String {
        match self {
            SplittingPreset::Mj => "MJ".into(),
            SplittingPreset::Mgs => "MGS".into(),
            SplittingPreset::Msor { alpha } => format!("MSOR({alpha})"),
            SplittingPreset::Maor { alpha, beta } => format!("MAOR({alpha},{beta})"),
            SplittingPreset::Mmsim => "MMSIM".into(),
            SplittingPreset::Amj => "AMJ".into(),
            SplittingPreset::Amgs => "AMGS".into(),
            SplittingPreset::Amsor { alpha } => format!("AMSOR({alpha})"),
            SplittingPreset::Amaor { alpha, beta } => format!("AMAOR({alpha},{beta})"),
        }
    }

    fn validate(&self) -> Result<(), LcpError> {
        let check = |name: &str, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(LcpError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match *self {
            SplittingPreset::Msor { alpha } | SplittingPreset::Amsor { alpha } => {
                check("alpha", alpha)
            }
            SplittingPreset::Maor { alpha, beta } | SplittingPreset::Amaor { alpha, beta } => {
                check("alpha", alpha).and(check("beta", beta))
            }
            _ => Ok(()),
        }
    }

    /// The first splitting matrix. Lower triangular for every preset.
    fn first_splitting(&self, a: &DenseMatrix) -> DenseMatrix {
        let m = a.rows();
        let mut m1 = DenseMatrix::zeros(m, m);
        let (diag_scale, lower_scale) = match *self {
            SplittingPreset::Mj | SplittingPreset::Amj => (1.0, 0.0),
            SplittingPreset::Mgs | SplittingPreset::Mmsim | SplittingPreset::Amgs => (1.0, 1.0),
            SplittingPreset::Msor { alpha } | SplittingPreset::Amsor { alpha } => {
                (1.0 / alpha, 1.0)
            }
            SplittingPreset::Maor { alpha, beta } | SplittingPreset::Amaor { alpha, beta } => {
                (1.0 / alpha, beta / alpha)
            }
        };
        for i in 0..m {
            m1[(i, i)] = diag_scale * a[(i, i)];
            for j in 0..i {
                m1[(i, j)] = lower_scale * a[(i, j)];
            }
        }
        m1
    }

    /// The second splitting matrix of the accelerated presets.
    fn second_splitting(&self, a: &DenseMatrix) -> DenseMatrix {
        let m = a.rows();
        let mut m2 = DenseMatrix::zeros(m, m);
        match self {
            // M₂ = A
            SplittingPreset::Mmsim => {
                for i in 0..m {
                    for j in 0..m {
                        m2[(i, j)] = a[(i, j)];
                    }
                }
            }
            // M₂ = D - U: keep the diagonal and the upper triangle of A
            _ => {
                for i in 0..m {
                    for j in i..m {
                        m2[(i, j)] = a[(i, j)];
                    }
                }
            }
        }
        m2
    }
}

/// Modulus-based matrix splitting iteration:
/// `(M₀ + γΩ) x⁺ = N₀ x + (γΩ - A)|x| - γq` with `N₀ = M₀ - A`,
/// returning `λ = (2/γ) max{0, x}`.
pub fn mmsi_solve(
    prob: &LcpProblem,
    preset: SplittingPreset,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    if preset.is_accelerated() {
        return Err(LcpError::InvalidPreset {
            preset: preset.name(),
            solver: "mmsi_solve".into(),
        });
    }
    modulus_splitting_solve(prob, preset, x0, cfg, false)
}

/// Accelerated modulus-based matrix splitting iteration:
/// `(M₁ + γΩ) x⁺ = N₁ x + (γΩ - M₂)|x| + N₂|x⁺| - γq` with
/// `N₁ = M₁ - A`, `N₂ = M₂ - A` strictly lower triangular, so a single
/// forward sweep resolves the implicit `|x⁺|` dependence.
pub fn ammsi_solve(
    prob: &LcpProblem,
    preset: SplittingPreset,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    if !preset.is_accelerated() {
        return Err(LcpError::InvalidPreset {
            preset: preset.name(),
            solver: "ammsi_solve".into(),
        });
    }
    modulus_splitting_solve(prob, preset, x0, cfg, true)
}

fn modulus_splitting_solve(
    prob: &LcpProblem,
    preset: SplittingPreset,
    x0: &[f64],
    cfg: &SolverConfig,
    accelerated: bool,
) -> Result<Solution, LcpError> {
    cfg.validate()?;
    preset.validate()?;
    let m = prob.dim();
    if x0.len() != m {
        return Err(LcpError::DimensionMismatch {
            expected: m,
            got: x0.len(),
        });
    }
    let a = prob.a();
    let q = prob.q();
    let adiag = prob.diagonal();
    let omega = ResolvedOmega::resolve(cfg.omega, cfg.gamma, &adiag);
    let gamma = cfg.gamma;

    let m1 = preset.first_splitting(a);
    let n1 = m1.sub(a);
    // The listed presets keep M₁ lower triangular; the forward sweep
    // below relies on it.
    for i in 0..m {
        for j in i + 1..m {
            if m1[(i, j)] != 0.0 {
                return Err(LcpError::InvalidPreset {
                    preset: preset.name(),
                    solver: "triangular sweep".into(),
                });
            }
        }
    }
    let (m2, n2) = if accelerated {
        let m2 = preset.second_splitting(a);
        let n2 = m2.sub(a);
        for i in 0..m {
            for j in i..m {
                if n2[(i, j)] != 0.0 {
                    return Err(LcpError::InvalidPreset {
                        preset: preset.name(),
                        solver: "strictly lower feedback".into(),
                    });
                }
            }
        }
        (m2, n2)
    } else {
        (a.clone(), DenseMatrix::zeros(m, m))
    };

    let mut x = x0.to_vec();
    let mut history = Vec::new();
    let mut work = 0u64;
    let mut converged = false;
    let mut iterations = 0;
    let mut lambda = vec![0.0; m];
    for _ in 0..cfg.max_iterations {
        let x_prev = x.clone();
        let abs_prev: Vec<f64> = x_prev.iter().map(|v| v.abs()).collect();
        for i in 0..m {
            // Everything that only involves the previous iterate.
            let mut rhs = -gamma * q[i];
            for j in 0..m {
                rhs += n1[(i, j)] * x_prev[j];
                let coeff = if i == j {
                    gamma * omega.get(i, &adiag) - m2[(i, j)]
                } else {
                    -m2[(i, j)]
                };
                rhs += coeff * abs_prev[j];
            }
            work += 2 * m as u64;
            // Feedback from the current sweep: N₂|x⁺| and the lower part
            // of (M₁ + γΩ) x⁺.
            for j in 0..i {
                rhs += n2[(i, j)] * x[j].abs();
                rhs -= m1[(i, j)] * x[j];
            }
            work += 2 * i as u64;
            x[i] = rhs / (m1[(i, i)] + gamma * omega.get(i, &adiag));
        }
        for i in 0..m {
            lambda[i] = 2.0 / gamma * x[i].max(0.0);
        }
        iterations += 1;
        let a_lambda = a.matvec(&lambda)?;
        work += (m * m) as u64;
        let res = residual_from_w(&lambda, &a_lambda, q);
        if cfg.record_history {
            history.push(res);
        }
        // Convergence is declared on the modulus iterate, matching the
        // fixed-point formulation: the λ residual alone can vanish while
        // the negative part of x is still in flight.
        if res < cfg.residual_tol {
            let fp = splitting_fixed_point_residual(prob, &x, cfg)?;
            work += 2 * (m * m) as u64;
            if fp < cfg.residual_tol {
                converged = true;
                break;
            }
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
        modulus: Some(x),
        work,
    })
}

/// Residual of the implicit fixed-point equation at `x`.
///
/// Because both splitting pairs recombine to `A`, the equation reduces to
/// `(A + γΩ)x = (γΩ - A)|x| - γq` independent of the preset, which is the
/// modulus form of the complementarity conditions. A converged modulus
/// iterate drives this to zero.
pub fn splitting_fixed_point_residual(
    prob: &LcpProblem,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<f64, LcpError> {
    if x.len() != prob.dim() {
        return Err(LcpError::DimensionMismatch {
            expected: prob.dim(),
            got: x.len(),
        });
    }
    let a = prob.a();
    let adiag = prob.diagonal();
    let omega = ResolvedOmega::resolve(cfg.omega, cfg.gamma, &adiag);
    let abs_x: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let ax = a.matvec(x)?;
    let a_abs = a.matvec(&abs_x)?;
    let r: Vec<f64> = (0..prob.dim())
        .map(|i| {
            let go = cfg.gamma * omega.get(i, &adiag);
            ax[i] + go * x[i] - go * abs_x[i] + a_abs[i] + cfg.gamma * prob.q()[i]
        })
        .collect();
    Ok(crate::linalg::norm2(&r))
}
