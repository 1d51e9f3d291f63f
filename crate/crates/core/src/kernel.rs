//! Closed forms and quadrature for the kernel-derived integrals.
//!
//! The central object is the tail integral
//! `T_delta(z, b) = ∫_0^∞ [e^{-x z^λ} - e^{-x b^λ}]^δ dx`,
//! which has closed forms for integer `δ` (binomial expansion) and is
//! evaluated by adaptive Gauss-Kronrod after `x = u/(1-u)` otherwise.

use crate::error::{Error, Result};
use crate::quad;

pub const TAIL_REL_TOL: f64 = 1e-9;

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

fn check_args(z: f64, b: f64, delta: f64, lambda: f64) -> Result<()> {
    if !(z > 0.0) || !(b > z) {
        return Err(Error::Argument(format!("tail integral needs 0 < z < b, got z={z}, b={b}")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Argument(format!("tail integral needs delta > 0, got {delta}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Argument(format!("tail integral needs lambda > 0, got {lambda}")));
    }
    Ok(())
}

/// `∫_0^∞ [e^{-x z^λ} - e^{-x b^λ}]^δ dx` for `0 < z < b <= inf`.
pub fn tail_integral(z: f64, b: f64, delta: f64, lambda: f64) -> Result<f64> {
    check_args(z, b, delta, lambda)?;
    let zl = z.powf(lambda);
    let bl = if b.is_infinite() { f64::INFINITY } else { b.powf(lambda) };
    if delta == 1.0 {
        let tail = if b.is_infinite() { 0.0 } else { b.powf(-lambda) };
        return Ok(z.powf(-lambda) - tail);
    }
    if delta.fract() == 0.0 && delta <= 64.0 {
        let d = delta as u32;
        let mut sum = 0.0;
        for j in 0..=d {
            let denom = j as f64 * bl + (d - j) as f64 * zl;
            if denom.is_infinite() {
                continue; // vanishing term for b = inf
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(d, j) / denom;
        }
        return Ok(sum);
    }
    Ok(tail_integral_quadrature(z, b, delta, lambda, TAIL_REL_TOL))
}

/// Quadrature route for the tail integral (any `δ > 0`); used directly for
/// non-integer exponents and as a cross-check of the closed forms.
pub fn tail_integral_quadrature(z: f64, b: f64, delta: f64, lambda: f64, rel_tol: f64) -> f64 {
    let zl = z.powf(lambda);
    let bl = if b.is_infinite() { f64::INFINITY } else { b.powf(lambda) };
    let f = |x: f64| -> f64 {
        let base = (-x * zl).exp() - if bl.is_finite() { (-x * bl).exp() } else { 0.0 };
        if base <= 0.0 {
            0.0
        } else {
            base.powf(delta)
        }
    };
    quad::integral_to_inf_exp(&f, 0.0, rel_tol).value
}

/// Lower-bound constant `C1 = [e^{-1} - e^{-2^{λ0}}]^δ (1 - 2^{λ0-λ})` valid in
/// `T_δ(2^k, 2^{k+1}) >= C1 * 2^{-kλ}` for every integer `k` and any
/// `0 < λ0 < λ`.
pub fn tail_integral_lower_c1(lambda: f64, lambda0: f64, delta: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda0 > 0.0 && lambda0 < lambda) {
        return Err(Error::Argument(format!(
            "c1 needs 0 < lambda0 < lambda, got lambda0={lambda0}, lambda={lambda}"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::Argument(format!("c1 needs delta > 0, got {delta}")));
    }
    let bracket = (-1.0f64).exp() - (-(2.0f64.powf(lambda0))).exp();
    Ok(bracket.powf(delta) * (1.0 - 2.0f64.powf(lambda0 - lambda)))
}

/// Best `C1` over a 32-point grid of admissible `λ0`.
pub fn best_c1(lambda: f64, delta: f64) -> f64 {
    let mut best = 0.0f64;
    for i in 1..=32 {
        let lambda0 = lambda * i as f64 / 33.0;
        if let Ok(c) = tail_integral_lower_c1(lambda, lambda0, delta) {
            best = best.max(c);
        }
    }
    best
}

/// `-d/dt T_δ(t, b)`: density of the Stieltjes measure `d[-T_δ(t, b)]`.
///
/// Closed form for integer `δ`; quadrature otherwise. For `δ = 1` this is
/// `λ t^{-λ-1}` independently of `b`.
pub fn neg_dtail(t: f64, b: f64, delta: f64, lambda: f64) -> Result<f64> {
    check_args(t, b, delta, lambda)?;
    if delta == 1.0 {
        return Ok(lambda * t.powf(-lambda - 1.0));
    }
    let tl = t.powf(lambda);
    let bl = if b.is_infinite() { f64::INFINITY } else { b.powf(lambda) };
    let front = delta * lambda * t.powf(lambda - 1.0);
    if delta.fract() == 0.0 && delta <= 64.0 {
        let d = delta as u32 - 1;
        let mut sum = 0.0;
        for j in 0..=d {
            let denom = j as f64 * bl + (d - j) as f64 * tl + tl;
            if denom.is_infinite() {
                continue;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(d, j) / (denom * denom);
        }
        return Ok(front * sum);
    }
    let f = |x: f64| -> f64 {
        let e_t = (-x * tl).exp();
        let base = e_t - if bl.is_finite() { (-x * bl).exp() } else { 0.0 };
        if base <= 0.0 {
            0.0
        } else {
            x * e_t * base.powf(delta - 1.0)
        }
    };
    Ok(front * quad::integral_to_inf_exp(&f, 0.0, TAIL_REL_TOL).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn delta_one_closed_form() {
        assert_relative_eq!(tail_integral(1.0, 2.0, 1.0, 1.0).unwrap(), 0.5);
        assert_relative_eq!(tail_integral(1.0, f64::INFINITY, 1.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn integer_delta_binomial() {
        // 1/2 - 2/3 + 1/4 = 1/12
        assert_relative_eq!(
            tail_integral(1.0, 2.0, 2.0, 1.0).unwrap(),
            1.0 / 12.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn half_delta_is_beta_function() {
        // substituting u = e^{-x} turns the (z=1, b=2, λ=1) integrand into
        // u^{-1/2}(1-u)^{1/2}, i.e. B(1/2, 3/2) = pi/2
        let v = tail_integral(1.0, 2.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_PI_2, max_relative = 1e-9);
    }

    #[test]
    fn c1_reference_values() {
        let c = tail_integral_lower_c1(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(c, 0.03654215076414555, max_relative = 1e-12);
        let c = tail_integral_lower_c1(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(c, 0.11627207896741482, max_relative = 1e-12);
        assert!(tail_integral_lower_c1(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn c1_bounds_dyadic_tail_integrals() {
        for lambda in [0.5, 1.0, 2.0] {
            for delta in [0.5, 1.0, 2.0] {
                let c1 = tail_integral_lower_c1(lambda, lambda / 2.0, delta).unwrap();
                assert!(c1 > 0.0);
                for k in -5..=5 {
                    let z = 2.0f64.powi(k);
                    let t = tail_integral(z, 2.0 * z, delta, lambda).unwrap();
                    let lower = c1 * 2.0f64.powf(-(k as f64) * lambda);
                    let upper = 2.0f64.powf(-(k as f64) * lambda) / delta;
                    assert!(t >= lower * (1.0 - 1e-9), "k={k} t={t} lower={lower}");
                    assert!(t <= upper * (1.0 + 1e-9), "k={k} t={t} upper={upper}");
                }
            }
        }
    }

    #[test]
    fn neg_dtail_delta_one() {
        assert_relative_eq!(neg_dtail(2.0, 5.0, 1.0, 1.0).unwrap(), 0.25);
        // finite difference cross-check, delta = 2
        let h = 1e-6;
        let fd = (tail_integral(2.0 - h, 5.0, 2.0, 1.5).unwrap()
            - tail_integral(2.0 + h, 5.0, 2.0, 1.5).unwrap())
            / (2.0 * h);
        assert_relative_eq!(neg_dtail(2.0, 5.0, 2.0, 1.5).unwrap(), fd, max_relative = 1e-7);
    }

    #[test]
    fn neg_dtail_fractional_matches_finite_difference() {
        let h = 1e-6;
        let fd = (tail_integral(1.5 - h, 3.0, 0.7, 1.0).unwrap()
            - tail_integral(1.5 + h, 3.0, 0.7, 1.0).unwrap())
            / (2.0 * h);
        assert_relative_eq!(neg_dtail(1.5, 3.0, 0.7, 1.0).unwrap(), fd, max_relative = 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn monotone_and_homogeneous(
            z in 0.2f64..2.0,
            gap in 0.3f64..3.0,
            c in 0.3f64..3.0,
            lambda in 0.4f64..2.5,
            d in 1u32..4,
        ) {
            let b = z + gap;
            let delta = d as f64;
            let t = tail_integral(z, b, delta, lambda).unwrap();
            // decreasing in z
            let t_z = tail_integral(z * 1.1, b, delta, lambda).unwrap();
            prop_assert!(t_z < t);
            // increasing in b
            let t_b = tail_integral(z, b * 1.1, delta, lambda).unwrap();
            prop_assert!(t_b > t);
            // homogeneity: T(cz, cb) = c^{-λ} T(z, b)
            let t_c = tail_integral(c * z, c * b, delta, lambda).unwrap();
            prop_assert!((t_c - c.powf(-lambda) * t).abs() <= 1e-12 * t.max(1e-300));
        }

        #[test]
        fn closed_form_matches_quadrature(
            z in 0.2f64..2.0,
            gap in 0.3f64..3.0,
            lambda in 0.4f64..2.5,
            d in 1u32..5,
        ) {
            let b = z + gap;
            let exact = tail_integral(z, b, d as f64, lambda).unwrap();
            let quad = tail_integral_quadrature(z, b, d as f64, lambda, 1e-11);
            prop_assert!((exact - quad).abs() <= 1e-9 * exact.abs().max(1e-300));
        }
    }
}
