use super::LcpError;

/// Maps a complementary pair `(λ, w)` to the modulus variable
/// `x = ½(γλ - Ω⁻¹w)`, the inverse of [`from_modulus`] on solutions.
///
/// Requires `λ, w ≥ 0` and per-component complementarity within a relative
/// tolerance; outside that set the round trip is undefined and an error is
/// returned.
pub fn to_modulus(
    lambda: &[f64],
    w: &[f64],
    gamma: f64,
    omega_diag: &[f64],
) -> Result<Vec<f64>, LcpError> {
    if w.len() != lambda.len() {
        return Err(LcpError::DimensionMismatch {
            expected: lambda.len(),
            got: w.len(),
        });
    }
    if omega_diag.len() != lambda.len() {
        return Err(LcpError::DimensionMismatch {
            expected: lambda.len(),
            got: omega_diag.len(),
        });
    }
    if !(gamma > 0.0) {
        return Err(LcpError::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let lmax = lambda.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let wmax = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * (1.0 + lmax) * (1.0 + wmax);
    for (i, (&li, &wi)) in lambda.iter().zip(w).enumerate() {
        let product = li * wi;
        if li < -tol || wi < -tol || product.abs() > tol {
            return Err(LcpError::ComplementarityViolation { index: i, product });
        }
    }
    Ok(lambda
        .iter()
        .zip(w)
        .zip(omega_diag)
        .map(|((&li, &wi), &oi)| 0.5 * (gamma * li - wi / oi))
        .collect())
}

/// Recovers `λ = (|x| + x)/γ` and `w = Ω(|x| - x)` from the modulus
/// variable. The positive and negative parts are sign-exclusive, so
/// `λᵢ wᵢ = 0` holds exactly.
pub fn from_modulus(x: &[f64], gamma: f64, omega_diag: &[f64]) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(x.len(), omega_diag.len());
    let lambda = x.iter().map(|&v| (v.abs() + v) / gamma).collect();
    let w = x
        .iter()
        .zip(omega_diag)
        .map(|(&v, &o)| o * (v.abs() - v))
        .collect();
    (lambda, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn active_component_maps_forward() {
        let x = to_modulus(&[2.0], &[0.0], 2.0, &[1.0]).unwrap();
        assert_eq!(x, vec![2.0]);
    }

    #[test]
    fn inactive_component_maps_forward() {
        let x = to_modulus(&[0.0], &[3.0], 2.0, &[1.0]).unwrap();
        assert_eq!(x, vec![-1.5]);
    }

    #[test]
    fn zero_pair_maps_to_zero() {
        let x = to_modulus(&[0.0], &[0.0], 2.0, &[1.0]).unwrap();
        assert_eq!(x, vec![0.0]);
    }

    #[test]
    fn from_modulus_recovers_both_branches() {
        let (l, w) = from_modulus(&[2.0, -1.5, 0.0], 2.0, &[1.0, 1.0, 1.0]);
        assert_eq!(l, vec![2.0, 0.0, 0.0]);
        assert_eq!(w, vec![0.0, 3.0, 0.0]);
        for (li, wi) in l.iter().zip(&w) {
            assert_eq!(li * wi, 0.0);
        }
    }

    #[test]
    fn violation_is_rejected() {
        assert!(matches!(
            to_modulus(&[1.0], &[1.0], 2.0, &[1.0]),
            Err(LcpError::ComplementarityViolation { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Complementary pair: per component either λ or w is active.
        fn pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
            proptest::collection::vec(
                (any::<bool>(), 0.0f64..50.0).prop_map(|(active, v)| {
                    if active {
                        (v, 0.0)
                    } else {
                        (0.0, v)
                    }
                }),
                1..12,
            )
        }

        proptest! {
            #[test]
            fn round_trip_recovers_the_pair(
                pairs in pairs(),
                gamma in 0.5f64..4.0,
                omega_scale in 0.1f64..5.0,
            ) {
                let lambda: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let w: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                let omega = vec![omega_scale; pairs.len()];
                let x = to_modulus(&lambda, &w, gamma, &omega).unwrap();
                let (lambda2, w2) = from_modulus(&x, gamma, &omega);
                for i in 0..pairs.len() {
                    prop_assert!((lambda[i] - lambda2[i]).abs() <= 1e-12 * (1.0 + lambda[i]));
                    prop_assert!((w[i] - w2[i]).abs() <= 1e-12 * (1.0 + w[i]));
                    prop_assert_eq!(lambda2[i] * w2[i], 0.0);
                }
            }
        }
    }
}
