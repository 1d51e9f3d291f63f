//! Adaptive quadrature used by the kernel and criterion integrals.
//!
//! Two workhorses: a Gauss-Kronrod (G7,K15) adaptive scheme for smooth
//! integrands, and tanh-sinh for finite intervals with endpoint
//! singularities. Semi-infinite integrals go through the substitutions
//! `x = a + s*u/(1-u)` (exponential decay) and `x = a/u` (power decay).

/// Kronrod-15 abscissae on [0, 1] side (symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.000_000_000_000_000_000_0,
];

/// Kronrod-15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_964,
    0.063_092_092_629_978_553_291,
    0.104_790_010_322_250_183_84,
    0.140_653_259_715_525_918_75,
    0.169_004_726_639_267_902_83,
    0.190_350_578_064_785_409_91,
    0.204_432_940_075_298_892_07,
    0.209_482_141_084_727_828_01,
];

/// Gauss-7 weights for the odd Kronrod abscissae.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_27,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_95,
    0.417_959_183_673_469_387_76,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = h * x;
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kron * h, (kron - gauss).abs() * h.abs())
}

/// Adaptive Gauss–Kronrod on a finite interval.
///
/// Bisects the interval with the largest local error estimate until the
/// total estimate satisfies the requested tolerances or the panel budget
/// is exhausted.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> QuadResult {
    const MAX_PANELS: usize = 4000;
    if a == b {
        return QuadResult { value: 0.0, abs_error: 0.0, converged: true };
    }
    let (v0, e0) = gk15(f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(a, b, v0, e0)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let tol = abs_tol.max(rel_tol * value.abs());
        if err <= tol || panels.len() >= MAX_PANELS {
            return QuadResult { value, abs_error: err, converged: err <= tol };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty panel list");
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval exhausted at machine precision
            let (v, e) = gk15(f, pa, pb);
            panels.push((pa, pb, v, e.min(f64::EPSILON * v.abs())));
            continue;
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Tanh-sinh (double exponential) quadrature on a finite interval.
///
/// Tolerates integrable endpoint singularities; integrand is never
/// evaluated at the endpoints themselves.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, abs_error: 0.0, converged: true };
    }
    let half = 0.5 * (b - a);
    // evaluate via the distance to the nearest endpoint: 1 - tanh(s) =
    // 2/(1+e^{2s}) avoids cancellation at the singular ends
    let pair = |u: f64| -> (f64, f64, f64) {
        // u > 0; returns (delta, w) with node distance half*delta from
        // either endpoint and weight w
        let s = (std::f64::consts::FRAC_PI_2) * u.sinh();
        let delta = 2.0 / (1.0 + (2.0 * s).exp());
        let w = (std::f64::consts::FRAC_PI_2) * u.cosh() / s.cosh().powi(2);
        (delta, w, s)
    };
    let g2 = |u: f64| -> f64 {
        let (delta, w, _) = pair(u);
        let x_lo = a + half * delta;
        let x_hi = b - half * delta;
        let mut acc = 0.0;
        if x_lo > a && x_lo < b {
            acc += f(x_lo);
        }
        if x_hi > a && x_hi < b && u != 0.0 {
            acc += f(x_hi);
        }
        acc * w
    };
    const T_MAX: f64 = 3.8; // node distance below machine epsilon beyond this
    let mut h = 0.5;
    // level 0
    let mut sum = {
        let mid = a + half; // u = 0 node is the midpoint, counted once
        (std::f64::consts::FRAC_PI_2) * f(mid)
    };
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        sum += g2(k as f64 * h);
        k += 1;
    }
    let mut value = sum * h;
    let mut prev;
    let mut converged = false;
    let mut abs_error = f64::INFINITY;
    for level in 0..14 {
        prev = value;
        h *= 0.5;
        // add the odd multiples of the new h
        let mut add = 0.0;
        let mut j = 1;
        while (j as f64) * h <= T_MAX {
            add += g2(j as f64 * h);
            j += 2;
        }
        sum += add;
        value = sum * h;
        abs_error = (value - prev).abs();
        if abs_error <= rel_tol * value.abs().max(1e-300) && level > 1 {
            converged = true;
            break;
        }
    }
    QuadResult { value: value * half, abs_error: abs_error * half.abs(), converged }
}

/// Integral over `(a, inf)` of an exponentially decaying integrand via
/// `x = a + s*u/(1-u)` with `s = max(a, 1)`, then adaptive GK on `(0, 1)`.
pub fn integral_to_inf_exp<F: Fn(f64) -> f64>(f: &F, a: f64, rel_tol: f64) -> QuadResult {
    let s = a.abs().max(1.0);
    let g = |u: f64| -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let x = a + s * u / (1.0 - u);
        let fx = f(x);
        if fx == 0.0 {
            return 0.0;
        }
        fx * s / ((1.0 - u) * (1.0 - u))
    };
    adaptive_gk(&g, 0.0, 1.0, rel_tol, 0.0)
}

/// Integral over `(a, inf)`, `a > 0`, of a power-law decaying integrand via
/// `x = a/u`, then tanh-sinh on `(0, 1)` (singularity at `u = 0`).
pub fn integral_to_inf_power<F: Fn(f64) -> f64>(f: &F, a: f64, rel_tol: f64) -> QuadResult {
    assert!(a > 0.0, "power-tail substitution needs a positive left end");
    let g = |u: f64| -> f64 {
        let x = a / u;
        let fx = f(x);
        if fx == 0.0 {
            return 0.0;
        }
        fx * a / (u * u)
    };
    tanh_sinh(&g, 0.0, 1.0, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk_polynomial_is_exact() {
        let r = adaptive_gk(&|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12, 0.0);
        assert_relative_eq!(r.value, 8.0, max_relative = 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn gk_handles_oscillation() {
        let r = adaptive_gk(&|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12, 0.0);
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert_relative_eq!(r.value, exact, max_relative = 1e-10);
    }

    #[test]
    fn tanh_sinh_integrable_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = tanh_sinh(&|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-12);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn tanh_sinh_beta_integral() {
        // ∫_0^1 u^{-1/2}(1-u)^{1/2} du = pi/2
        let r = tanh_sinh(&|u: f64| u.powf(-0.5) * (1.0 - u).powf(0.5), 0.0, 1.0, 1e-12);
        assert_relative_eq!(r.value, std::f64::consts::FRAC_PI_2, max_relative = 1e-10);
    }

    #[test]
    fn exp_tail_matches_closed_form() {
        // ∫_0^∞ e^{-3x} dx = 1/3
        let r = integral_to_inf_exp(&|x: f64| (-3.0 * x).exp(), 0.0, 1e-12);
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-11);
        // ∫_2^∞ e^{-x} dx = e^{-2}
        let r = integral_to_inf_exp(&|x: f64| (-x).exp(), 2.0, 1e-12);
        assert_relative_eq!(r.value, (-2.0f64).exp(), max_relative = 1e-11);
    }

    #[test]
    fn power_tail_matches_closed_form() {
        // ∫_1^∞ x^{-3} dx = 1/2
        let r = integral_to_inf_power(&|x: f64| x.powi(-3), 1.0, 1e-12);
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-10);
    }
}
