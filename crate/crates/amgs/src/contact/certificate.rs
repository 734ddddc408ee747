//! Contraction certificates for the accelerated modulus-based sweep.
//!
//! For `A = D - L - U` and a positive diagonal Ω, the sweep contracts in
//! the modulus variable with factor
//!
//! ```text
//! δ = 2 ‖(D + γΩ)⁻¹ D‖ τ + ‖(D + γΩ)⁻¹ (γΩ - D)‖,   τ = ‖(D - L)⁻¹ U‖
//! ```
//!
//! and δ < 1 guarantees convergence to the unique solution. With
//! `Ω = αD` the factor collapses to the closed form
//! `δ = (2τ + |αγ - 1|)/(1 + αγ)`, minimized at `α = 1/γ` where `δ = τ`.
//! Computing τ requires densifying the triangular factors and a spectral
//! norm, so certificates are offline diagnostics, never part of a solve.

use super::ContactError;
use crate::lcp::{OmegaChoice, ResolvedOmega, SolverConfig};
use crate::linalg::{spectral_norm, split_dlu, DenseMatrix};

const NORM_TOL: f64 = 1e-10;
const NORM_MAX_ITER: usize = 10_000;

/// Certificate quantities. `xi`, `eta`, `mu` are the pieces the bound
/// decomposes into; `mu` vanishes identically for this sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCertificate {
    pub tau: f64,
    pub xi: f64,
    pub eta: f64,
    pub mu: f64,
    pub delta: f64,
    pub guaranteed: bool,
    /// Whether the underlying spectral-norm estimate converged.
    pub norm_converged: bool,
}

impl ConvergenceCertificate {
    /// Closed form of δ for `Ω = αD`.
    pub fn closed_form_delta(tau: f64, alpha: f64, gamma: f64) -> f64 {
        (2.0 * tau + (alpha * gamma - 1.0).abs()) / (1.0 + alpha * gamma)
    }

    /// Plain-text report, one `key=value` per line.
    pub fn report(&self) -> String {
        format!(
            "tau={}\nxi={}\neta={}\nmu={}\ndelta={}\nguaranteed={}\n",
            self.tau, self.xi, self.eta, self.mu, self.delta, self.guaranteed
        )
    }

    /// Downgrades the guarantee for boxes with negative lower bounds,
    /// where the modulus relation is outside the analyzed regime.
    pub fn for_bounds(mut self, lower: &[f64]) -> Self {
        if lower.iter().any(|&l| l < 0.0) {
            self.guaranteed = false;
        }
        self
    }
}

/// Computes `τ = ‖(D - L)⁻¹U‖` by forward substitution on the columns of
/// `U`, followed by a power-iteration spectral norm.
pub fn tau(a: &DenseMatrix) -> Result<(f64, bool), ContactError> {
    let split = split_dlu(a)?;
    let m = a.rows();
    // (D - L) has A's strict lower triangle below D.
    let mut dl = DenseMatrix::zeros(m, m);
    for i in 0..m {
        dl[(i, i)] = split.d[i];
        for j in 0..i {
            dl[(i, j)] = a[(i, j)];
        }
    }
    let u = split.u.to_dense();
    let mut x = DenseMatrix::zeros(m, m);
    for col in 0..m {
        let rhs: Vec<f64> = (0..m).map(|r| u[(r, col)]).collect();
        let solved = dl
            .forward_substitute(&rhs)
            .map_err(ContactError::Linalg)?;
        for r in 0..m {
            x[(r, col)] = solved[r];
        }
    }
    let est = spectral_norm(&x, NORM_TOL, NORM_MAX_ITER);
    Ok((est.value, est.converged))
}

/// Builds the full certificate for a dense coefficient matrix and a solver
/// configuration (γ and the Ω choice are read from it).
pub fn certificate(
    a: &DenseMatrix,
    cfg: &SolverConfig,
) -> Result<ConvergenceCertificate, ContactError> {
    cfg.validate().map_err(ContactError::Lcp)?;
    let (tau_value, norm_converged) = tau(a)?;
    let gamma = cfg.gamma;
    let adiag = a.diagonal();
    let omega = ResolvedOmega::resolve(cfg.omega, gamma, &adiag);
    // Both factors are diagonal, so their spectral norms are plain maxima.
    let mut scale = 0.0f64; // ‖(D + γΩ)⁻¹ D‖
    let mut eta = 0.0f64; //   ‖(D + γΩ)⁻¹ (γΩ - D)‖
    for (i, &d) in adiag.iter().enumerate() {
        let go = gamma * omega.get(i, &adiag);
        scale = scale.max(d / (d + go));
        eta = eta.max((go - d).abs() / (d + go));
    }
    let xi = scale * tau_value;
    let mu = 0.0;
    let delta = 2.0 * xi + eta + mu;
    if let OmegaChoice::ScaledDiagonal(alpha) = cfg.omega {
        let closed = ConvergenceCertificate::closed_form_delta(tau_value, alpha, gamma);
        assert!(
            (delta - closed).abs() <= 1e-9,
            "certificate mismatch: general {delta} vs closed form {closed}"
        );
    }
    Ok(ConvergenceCertificate {
        tau: tau_value,
        xi,
        eta,
        mu,
        delta,
        guaranteed: delta < 1.0,
        norm_converged,
    })
}

/// Evaluates the closed-form δ over a grid of α values (for `Ω = αD`).
pub fn alpha_sweep_certificates(
    a: &DenseMatrix,
    gamma: f64,
    alphas: &[f64],
) -> Result<Vec<(f64, f64)>, ContactError> {
    let (tau_value, _) = tau(a)?;
    Ok(alphas
        .iter()
        .map(|&alpha| {
            (
                alpha,
                ConvergenceCertificate::closed_form_delta(tau_value, alpha, gamma),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcp::OmegaChoice;

    fn two_by_two() -> DenseMatrix {
        DenseMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]])
    }

    #[test]
    fn tau_matches_hand_value() {
        let (t, ok) = tau(&two_by_two()).unwrap();
        assert!(ok);
        assert!((t - 5.0f64.sqrt() / 4.0).abs() < 1e-9);
    }

    #[test]
    fn optimal_alpha_gives_delta_equal_tau() {
        let cfg = SolverConfig::default().with_omega(OmegaChoice::ScaledDiagonal(0.5));
        let cert = certificate(&two_by_two(), &cfg).unwrap();
        assert!((cert.delta - cert.tau).abs() < 1e-12);
        assert!(cert.guaranteed);
        assert_eq!(cert.mu, 0.0);
    }

    #[test]
    fn larger_alpha_follows_closed_form() {
        // αγ = 2 gives δ = (2τ + 1)/3
        let cfg = SolverConfig::default().with_omega(OmegaChoice::ScaledDiagonal(1.0));
        let cert = certificate(&two_by_two(), &cfg).unwrap();
        let expected = (2.0 * cert.tau + 1.0) / 3.0;
        assert!((cert.delta - expected).abs() < 1e-12);
        // (2·(√5/4) + 1)/3
        assert!((cert.delta - 0.706_011_329_583_298_3).abs() < 1e-9);
    }

    #[test]
    fn diagonal_matrix_has_zero_delta_at_matched_omega() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 7.0]]);
        let cfg = SolverConfig::default().with_omega(OmegaChoice::ScaledDiagonal(0.5));
        let cert = certificate(&a, &cfg).unwrap();
        assert_eq!(cert.tau, 0.0);
        assert_eq!(cert.delta, 0.0);
        assert!(cert.guaranteed);
    }

    #[test]
    fn sweep_is_minimized_at_inverse_gamma() {
        let gamma = 2.0;
        let alphas: Vec<f64> = (1..=40).map(|k| 0.05 * k as f64).collect();
        let curve = alpha_sweep_certificates(&two_by_two(), gamma, &alphas).unwrap();
        let (tau_value, _) = tau(&two_by_two()).unwrap();
        let best = curve
            .iter()
            .cloned()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(best.0, 0.5);
        assert!((best.1 - tau_value).abs() < 1e-12);
        // δ(α) → 1 as α grows
        let last = curve.last().unwrap().1;
        assert!(last < 1.0 && last > best.1);
    }

    #[test]
    fn negative_lower_bounds_clear_the_guarantee()
    {
        let cfg = SolverConfig::default().with_omega(OmegaChoice::ScaledDiagonal(0.5));
        let cert = certificate(&two_by_two(), &cfg).unwrap();
        assert!(cert.guaranteed);
        let friction = cert.for_bounds(&[0.0, -0.5]);
        assert!(!friction.guaranteed);
        let normal_only = certificate(&two_by_two(), &cfg).unwrap().for_bounds(&[0.0, 0.0]);
        assert!(normal_only.guaranteed);
    }

    #[test]
    fn report_lists_key_values() {
        let cfg = SolverConfig::default().with_omega(OmegaChoice::ScaledDiagonal(0.5));
        let cert = certificate(&two_by_two(), &cfg).unwrap();
        let text = cert.report();
        for key in ["tau=", "xi=", "eta=", "mu=", "delta=", "guaranteed="] {
            assert!(text.contains(key), "missing {key}");
        }
    }
}
