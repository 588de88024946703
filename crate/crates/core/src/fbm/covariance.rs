use super::{normalization_constant, HurstParam};
use crate::error::{Error, Result};
use crate::quadrature::{beta, integrate_endpoint_singular};

/// `E{B_t B_s} = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2`.
pub fn fbm_covariance(h: HurstParam, t: f64, s: f64) -> f64 {
    let two_h = 2.0 * h.value();
    0.5 * (t.powf(two_h) + s.powf(two_h) - (t - s).abs().powf(two_h))
}

/// Cross-covariance `E{B¹_t B²_s}` of the correlated pair:
///
/// `ρ c_{H₁} c_{H₂} ∫_0^t ∫_0^s β(u,v) |u-v|^{H₁+H₂-2} u^{H₁-H₂} v^{H₂-H₁} dv du`
///
/// with `β = B(H₁-1/2, 2-H₁-H₂)` on `u ≤ v` and `B(H₂-1/2, 2-H₁-H₂)`
/// otherwise.
///
/// The integrand is homogeneous of degree `a = H₁+H₂-2`, so with
/// `u = r x`, `v = r(1-x)` the radial integral is exact and what remains is
///
/// `1/(a+2) ∫_0^1 β(x) |2x-1|^a x^{H₁-H₂} (1-x)^{H₂-H₁} R(x)^{a+2} dx`,
/// `R(x) = min(t/x, s/(1-x))`.
///
/// The `x` range is split at the diagonal `x = 1/2` and at the corner
/// `x = t/(t+s)`; the algebraic singularities at `0`, `1/2` and `1` (the
/// axes and the diagonal of the original square) are removed by power
/// substitutions in [`integrate_endpoint_singular`].
pub fn cross_covariance(h1: HurstParam, h2: HurstParam, rho: f64, t: f64, s: f64) -> Result<f64> {
    if !(rho.is_finite() && rho.abs() <= 1.0) {
        return Err(Error::domain("rho", format!("{rho} is outside [-1, 1]")));
    }
    if !(t.is_finite() && s.is_finite()) || t < 0.0 || s < 0.0 {
        return Err(Error::domain(
            "time",
            format!("({t}, {s}) must be finite and nonnegative"),
        ));
    }
    if rho == 0.0 || t == 0.0 || s == 0.0 {
        return Ok(0.0);
    }
    let (a1, a2) = (h1.value(), h2.value());
    let a = a1 + a2 - 2.0;
    let g = a1 - a2;
    let beta_lower = beta(a1 - 0.5, 2.0 - a1 - a2);
    let beta_upper = beta(a2 - 0.5, 2.0 - a1 - a2);

    let corner = t / (t + s);
    let mut breaks = vec![0.0, 0.5, corner, 1.0];
    breaks.sort_by(|x, y| x.total_cmp(y));
    breaks.dedup();

    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let ea = if lo == 0.0 {
            g
        } else if lo == 0.5 {
            a
        } else {
            0.0
        };
        let eb = if hi == 1.0 {
            -g
        } else if hi == 0.5 {
            a
        } else {
            0.0
        };
        let b = if 0.5 * (lo + hi) <= 0.5 {
            beta_lower
        } else {
            beta_upper
        };
        total += b * integrate_endpoint_singular(lo, hi, ea, eb, |x, da, db| {
            let x_exact = if lo == 0.0 { da } else { x };
            let y_exact = if hi == 1.0 { db } else { 1.0 - x };
            let diag = if lo == 0.5 {
                2.0 * da
            } else if hi == 0.5 {
                2.0 * db
            } else {
                (2.0 * x - 1.0).abs()
            };
            let r = (t / x_exact).min(s / y_exact);
            diag.powf(a) * x_exact.powf(g) * y_exact.powf(-g) * r.powf(a + 2.0)
        });
    }
    let c1 = normalization_constant(h1);
    let c2 = normalization_constant(h2);
    Ok(rho * c1 * c2 * total / (a + 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(h: f64) -> HurstParam {
        HurstParam::new(h).unwrap()
    }

    #[test]
    fn fbm_covariance_closed_forms() {
        let h = hp(0.7);
        assert!((fbm_covariance(h, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(fbm_covariance(h, 0.0, 0.8), 0.0);
        assert!((fbm_covariance(h, 2.0, 1.0) - 2f64.powf(0.4)).abs() < 1e-12);
        assert!((2f64.powf(0.4) - 1.31951).abs() < 1e-5);
    }

    #[test]
    fn zero_correlation_gives_zero() {
        assert_eq!(
            cross_covariance(hp(0.6), hp(0.8), 0.0, 1.0, 0.4).unwrap(),
            0.0
        );
    }

    #[test]
    fn equal_hurst_unit_correlation_reduces_to_fbm_covariance() {
        for h in [0.55, 0.7, 0.9] {
            for &(t, s) in &[(1.0, 1.0), (0.25, 2.0), (2.0, 0.5), (0.5, 0.25)] {
                let got = cross_covariance(hp(h), hp(h), 1.0, t, s).unwrap();
                let want = fbm_covariance(hp(h), t, s);
                assert!(
                    (got - want).abs() < 1e-6,
                    "h={h} t={t} s={s}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn linear_in_rho() {
        let full = cross_covariance(hp(0.6), hp(0.7), 1.0, 0.7, 1.3).unwrap();
        let half = cross_covariance(hp(0.6), hp(0.7), 0.5, 0.7, 1.3).unwrap();
        assert!((half - 0.5 * full).abs() <= 1e-15 * full.abs());
    }

    #[test]
    fn rejects_bad_rho() {
        assert!(cross_covariance(hp(0.6), hp(0.7), 1.5, 1.0, 1.0).is_err());
        assert!(cross_covariance(hp(0.6), hp(0.7), 0.5, -1.0, 1.0).is_err());
    }
}
