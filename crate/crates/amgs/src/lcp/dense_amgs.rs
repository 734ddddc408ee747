use super::{
    blcp_residual_from_w, residual_from_w, BoxedLcpProblem, LcpError, LcpProblem, ResolvedOmega,
    Solution, SolverConfig,
};

/// Accelerated modulus-based Gauss-Seidel sweep over an explicit matrix.
///
/// The iteration tracks the modulus variable `x` next to the impulse
/// `λ = (2/γ) max{0, x}` and advances one component at a time:
///
/// ```text
/// xᵢ ← xᵢ - γ/(Aᵢᵢ + γΩᵢᵢ) (Σ_{j<i} Aᵢⱼλⱼ' + Σ_{j≥i} Aᵢⱼλⱼ + qᵢ - 2Ωᵢᵢ(x₋)ᵢ)
/// ```
///
/// where `λ'` entries are the already-updated values of the current sweep
/// and `(x₋)ᵢ` is the negative part of `xᵢ` from the previous sweep. Each
/// `λᵢ` is refreshed immediately after its `xᵢ`, so one pass is a genuine
/// Gauss-Seidel sweep. Box bounds replace the positive-part map with the
/// clamp into `[l, u]` scaled by `2/γ`.
///
/// The struct form exposes single sweeps so tests can compare iterate
/// trajectories against the matrix-free variant.
pub struct DenseAmgs<'a> {
    prob: &'a LcpProblem,
    bounds: Option<(&'a [f64], &'a [f64])>,
    gamma: f64,
    adiag: Vec<f64>,
    omega: ResolvedOmega,
    x: Vec<f64>,
    lambda: Vec<f64>,
    work: u64,
}

impl<'a> DenseAmgs<'a> {
    pub fn new(
        prob: &'a LcpProblem,
        lambda0: &[f64],
        cfg: &SolverConfig,
    ) -> Result<Self, LcpError> {
        Self::with_bounds(prob, None, lambda0, cfg)
    }

    pub fn new_boxed(
        prob: &'a BoxedLcpProblem,
        lambda0: &[f64],
        cfg: &SolverConfig,
    ) -> Result<Self, LcpError> {
        Self::with_bounds(
            &prob.base,
            Some((prob.l.as_slice(), prob.u.as_slice())),
            lambda0,
            cfg,
        )
    }

    fn with_bounds(
        prob: &'a LcpProblem,
        bounds: Option<(&'a [f64], &'a [f64])>,
        lambda0: &[f64],
        cfg: &SolverConfig,
    ) -> Result<Self, LcpError> {
        cfg.validate()?;
        let m = prob.dim();
        if lambda0.len() != m {
            return Err(LcpError::DimensionMismatch {
                expected: m,
                got: lambda0.len(),
            });
        }
        let adiag = prob.diagonal();
        let omega = ResolvedOmega::resolve(cfg.omega, cfg.gamma, &adiag);
        let project = |i: usize, v: f64| match bounds {
            None => v.max(0.0),
            Some((l, u)) => v.clamp(l[i], u[i]),
        };
        let lambda: Vec<f64> = lambda0
            .iter()
            .enumerate()
            .map(|(i, &v)| project(i, v))
            .collect();
        // x tracks the impulse shifted by the lower bound, normalizing the
        // box to [0, u - l] so the positive/negative split of x encodes
        // bound activity; at l = 0 the shift is an exact no-op.
        let x = lambda
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let shift = bounds.map_or(0.0, |(low, _)| low[i]);
                0.5 * cfg.gamma * (l - shift)
            })
            .collect();
        Ok(Self {
            prob,
            bounds,
            gamma: cfg.gamma,
            adiag,
            omega,
            x,
            lambda,
            work: 0,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn work(&self) -> u64 {
        self.work
    }

    /// One full sweep over all components.
    pub fn sweep(&mut self) {
        let a = self.prob.a();
        let q = self.prob.q();
        let m = self.prob.dim();
        for i in 0..m {
            let row = a.row(i);
            let mut s = q[i];
            for (j, &v) in row.iter().enumerate() {
                s += v * self.lambda[j];
            }
            self.work += m as u64;
            let omega_ii = self.omega.get(i, &self.adiag);
            let x_prev = self.x[i];
            let x_neg = (-x_prev).max(0.0);
            let xi = x_prev - self.gamma / (self.adiag[i] + self.gamma * omega_ii)
                * (s - 2.0 * omega_ii * x_neg);
            self.x[i] = xi;
            self.lambda[i] = match self.bounds {
                None => 2.0 / self.gamma * xi.max(0.0),
                Some((l, u)) => l[i] + 2.0 / self.gamma * xi.clamp(0.0, u[i] - l[i]),
            };
        }
    }

    /// Residual of the current iterate (box-aware when bounds are present).
    pub fn residual(&mut self) -> f64 {
        let a_lambda = self
            .prob
            .a()
            .matvec(&self.lambda)
            .expect("dimensions fixed at construction");
        self.work += (self.prob.dim() * self.prob.dim()) as u64;
        match self.bounds {
            None => residual_from_w(&self.lambda, &a_lambda, self.prob.q()),
            Some((l, u)) => blcp_residual_from_w(&self.lambda, &a_lambda, self.prob.q(), l, u),
        }
    }

    fn run(mut self, cfg: &SolverConfig) -> Solution {
        let mut history = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        for _ in 0..cfg.max_iterations {
            self.sweep();
            iterations += 1;
            let res = self.residual();
            if cfg.record_history {
                history.push(res);
            }
            if res < cfg.residual_tol {
                converged = true;
                break;
            }
        }
        let w: Vec<f64> = self
            .prob
            .a()
            .matvec(&self.lambda)
            .expect("dimensions fixed at construction")
            .iter()
            .zip(self.prob.q())
            .map(|(al, qi)| al + qi)
            .collect();
        Solution {
            lambda: self.lambda,
            w,
            iterations,
            residual_history: history,
            converged,
            modulus: Some(self.x),
            work: self.work,
        }
    }
}

/// Accelerated modulus-based Gauss-Seidel on a dense problem.
pub fn amgs_dense_solve(
    prob: &LcpProblem,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    Ok(DenseAmgs::new(prob, lambda0, cfg)?.run(cfg))
}

/// Boxed variant: the initial iterate is projected into `[l, u]` and each
/// component update clamps into the box.
pub fn amgs_dense_boxed_solve(
    prob: &BoxedLcpProblem,
    lambda0: &[f64],
    cfg: &SolverConfig,
) -> Result<Solution, LcpError> {
    Ok(DenseAmgs::new_boxed(prob, lambda0, cfg)?.run(cfg))
}
