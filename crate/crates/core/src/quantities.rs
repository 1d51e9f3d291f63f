//! Shared piecewise-power calculus for the criterion quantities.
//!
//! Everything here exploits that `F(t) = ∫_0^t v^ρ` is piecewise of the
//! form `B + C t^m` (or `B + A ln t`), so suprema of `t^μ F(t)^η` have
//! closed-form critical points and the `F`-weighted integrals reduce to
//! power integrals on pure-power segments, with certified quadrature on
//! the remaining ones.

use crate::quad;
use crate::weights::{power_primitive_diff, Weight};

/// Product with the `0 * inf = 0` convention used by every quantity.
pub(crate) fn xmul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// One maximal interval on which `F(t) = ∫_0^t v^ρ` has a single analytic
/// expression. Gap segments carry `coeff = 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Seg {
    pub lo: f64,
    pub hi: f64,
    /// `A = c^ρ`; the density of `F` on the segment is `A t^{vexp}`.
    pub coeff: f64,
    /// `ρ β`
    pub vexp: f64,
    /// `ρ β + 1` (antiderivative exponent; 0 encodes the log case)
    pub m: f64,
    /// `F(lo)`; `+inf` once the accumulation has diverged
    pub f_start: f64,
}

impl Seg {
    /// `F(t)` inside the segment.
    pub fn f_at(&self, t: f64) -> f64 {
        if self.f_start.is_infinite() {
            return f64::INFINITY;
        }
        if self.coeff == 0.0 {
            return self.f_start;
        }
        if self.m == 0.0 {
            return self.f_start + self.coeff * (t / self.lo).ln();
        }
        let lo_m = if self.lo == 0.0 { 0.0 } else { self.lo.powf(self.m) };
        self.f_start + self.coeff * (t.powf(self.m) - lo_m) / self.m
    }

    /// `F(hi)` (may be `+inf`).
    pub fn f_end(&self) -> f64 {
        if self.hi.is_infinite() {
            if self.coeff == 0.0 {
                return self.f_start;
            }
            if self.m >= 0.0 {
                return f64::INFINITY;
            }
            let lo_m = self.lo.powf(self.m);
            return self.f_start + self.coeff * (0.0 - lo_m) / self.m;
        }
        self.f_at(self.hi)
    }
}

/// Covers `(0, inf)` with segments for `F(t) = ∫_0^t v^ρ`.
pub(crate) fn segments(w: &Weight, rho: f64) -> Vec<Seg> {
    let mut segs = Vec::new();
    let mut cursor = 0.0f64;
    let mut f_acc = 0.0f64;
    for p in w.pieces() {
        if p.lo > cursor {
            segs.push(Seg { lo: cursor, hi: p.lo, coeff: 0.0, vexp: 0.0, m: 1.0, f_start: f_acc });
            cursor = p.lo;
        }
        let a = p.coeff.powf(rho);
        let vexp = rho * p.exp;
        let m = vexp + 1.0;
        let seg = Seg { lo: p.lo, hi: p.hi, coeff: a, vexp, m, f_start: f_acc };
        // divergence at the left端 of a 0-touching piece
        if p.lo == 0.0 && m <= 0.0 {
            f_acc = f64::INFINITY;
            segs.push(Seg { f_start: f64::INFINITY, ..seg });
        } else {
            let end = seg.f_end();
            segs.push(seg);
            f_acc = end;
        }
        cursor = p.hi;
    }
    if cursor.is_finite() {
        segs.push(Seg { lo: cursor, hi: f64::INFINITY, coeff: 0.0, vexp: 0.0, m: 1.0, f_start: f_acc });
    }
    segs
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SupResult {
    pub value: f64,
    /// Point where the supremum is attained; 0 or +inf mark suprema only
    /// reached in the limit.
    pub witness: f64,
}

/// `sup_{t > 0} t^mu * F_ρ(t)^eta` with `mu < 0 <= eta`; exact via per-piece
/// closed-form critical points plus symbolic limits at 0 and infinity.
pub(crate) fn sup_power_moment(w: &Weight, rho: f64, mu: f64, eta: f64) -> SupResult {
    debug_assert!(mu < 0.0 && eta > 0.0);
    let mut best = SupResult { value: 0.0, witness: 0.0 };
    let mut consider = |value: f64, witness: f64, best: &mut SupResult| {
        if value > best.value {
            *best = SupResult { value, witness };
        }
    };
    for seg in segments(w, rho) {
        if seg.f_start.is_infinite() {
            return SupResult { value: f64::INFINITY, witness: seg.lo };
        }
        let phi = |t: f64, f: f64| xmul(t.powf(mu), f.powf(eta));
        // limit at 0 for a 0-touching segment
        if seg.lo == 0.0 {
            if seg.coeff > 0.0 {
                // F ~ (A/m) t^m near 0, m > 0 by validity
                let e = mu + eta * seg.m;
                if e < 0.0 {
                    return SupResult { value: f64::INFINITY, witness: 0.0 };
                }
                if e == 0.0 {
                    consider((seg.coeff / seg.m).powf(eta), 0.0, &mut best);
                }
            }
        } else {
            consider(phi(seg.lo, seg.f_start), seg.lo, &mut best);
        }
        if seg.hi.is_finite() {
            consider(phi(seg.hi, seg.f_at(seg.hi)), seg.hi, &mut best);
        } else {
            // behavior as t -> inf
            if seg.coeff > 0.0 && seg.m > 0.0 {
                let e = mu + eta * seg.m;
                if e > 0.0 {
                    return SupResult { value: f64::INFINITY, witness: f64::INFINITY };
                }
                if e == 0.0 {
                    consider((seg.coeff / seg.m).powf(eta), f64::INFINITY, &mut best);
                }
            }
            // m <= 0 or gap: phi -> 0
        }
        // interior critical point
        if seg.coeff > 0.0 && seg.f_start.is_finite() {
            if seg.m != 0.0 {
                let c = seg.coeff / seg.m;
                let lo_m = if seg.lo == 0.0 { 0.0 } else { seg.lo.powf(seg.m) };
                let b = seg.f_start - c * lo_m;
                let denom = c * (mu + eta * seg.m);
                if denom != 0.0 {
                    let tm = -mu * b / denom;
                    if tm > 0.0 {
                        let t = tm.powf(1.0 / seg.m);
                        if t > seg.lo && t < seg.hi {
                            consider(phi(t, seg.f_at(t)), t, &mut best);
                        }
                    }
                }
            } else {
                // F = f_start + A ln(t/lo)
                let ln_ratio = -(seg.f_start / seg.coeff) - eta / mu;
                let t = seg.lo * ln_ratio.exp();
                if t > seg.lo && t < seg.hi && t.is_finite() {
                    consider(phi(t, seg.f_at(t)), t, &mut best);
                }
            }
        }
    }
    best
}

/// Limit of `t^mu F_ρ(t)^eta` as `t -> 0+` (`mu < 0 <= eta`).
pub(crate) fn limit_zero_power_moment(w: &Weight, rho: f64, mu: f64, eta: f64) -> f64 {
    let segs = segments(w, rho);
    let first = match segs.first() {
        Some(s) => s,
        None => return 0.0,
    };
    if first.lo > 0.0 || first.coeff == 0.0 {
        return 0.0; // F vanishes near 0
    }
    if first.m <= 0.0 {
        return f64::INFINITY;
    }
    let e = mu + eta * first.m;
    if e > 0.0 {
        0.0
    } else if e == 0.0 {
        (first.coeff / first.m).powf(eta)
    } else {
        f64::INFINITY
    }
}

/// Limit of `t^mu F_ρ(t)^eta` as `t -> inf` (`mu < 0 <= eta`).
pub(crate) fn limit_inf_power_moment(w: &Weight, rho: f64, mu: f64, eta: f64) -> f64 {
    let segs = segments(w, rho);
    let last = match segs.last() {
        Some(s) => s,
        None => return 0.0,
    };
    if last.f_start.is_infinite() {
        return f64::INFINITY;
    }
    if last.coeff == 0.0 || last.m < 0.0 {
        return 0.0; // F bounded, t^mu -> 0
    }
    if last.m == 0.0 {
        return 0.0; // logarithmic growth loses to the power
    }
    let e = mu + eta * last.m;
    if e > 0.0 {
        f64::INFINITY
    } else if e == 0.0 {
        (last.coeff / last.m).powf(eta)
    } else {
        0.0
    }
}

/// `esup_{t>0} t^mu E(t)` where `E(t) = esup_{0<x<t} v(x)` (`mu < 0`),
/// together with the witness. Exact: `E` is piecewise monomial.
pub(crate) fn sup_esup_moment(w: &Weight, mu: f64) -> SupResult {
    debug_assert!(mu < 0.0);
    let mut best = SupResult { value: 0.0, witness: 0.0 };
    for seg in w.running_esup_segments(0.0) {
        if seg.coeff == 0.0 {
            continue;
        }
        if seg.coeff.is_infinite() {
            return SupResult { value: f64::INFINITY, witness: seg.t0 };
        }
        let e = mu + seg.exp;
        // value c t^{mu+exp} for t in (t0, t1): monotone, check both ends
        let at = |t: f64| -> f64 {
            if t == 0.0 {
                if e < 0.0 {
                    f64::INFINITY
                } else if e == 0.0 {
                    seg.coeff
                } else {
                    0.0
                }
            } else if t.is_infinite() {
                if e > 0.0 {
                    f64::INFINITY
                } else if e == 0.0 {
                    seg.coeff
                } else {
                    0.0
                }
            } else {
                seg.coeff * t.powf(e)
            }
        };
        for t in [seg.t0, seg.t1] {
            let v = at(t);
            if v > best.value {
                best = SupResult { value: v, witness: t };
            }
        }
    }
    best
}

/// `∫_0^∞ t^mu E(t)^kappa dt` of the running esup; exact since the running
/// esup is piecewise monomial.
pub(crate) fn esup_moment_integral(w: &Weight, kappa: f64, mu: f64) -> f64 {
    let mut total = 0.0f64;
    for seg in w.running_esup_segments(0.0) {
        if seg.coeff == 0.0 {
            continue;
        }
        if seg.coeff.is_infinite() {
            return f64::INFINITY;
        }
        let c = seg.coeff.powf(kappa);
        let e = mu + seg.exp * kappa;
        total += xmul(c, power_primitive_diff(e, seg.t0, seg.t1));
        if total.is_infinite() {
            return f64::INFINITY;
        }
    }
    total
}

/// `∫_0^∞ t^mu F_ρ(t)^sigma [v^ρ(t)]^{density} dt`.
///
/// Exact on pure-power and constant-`F` segments, adaptive quadrature on
/// the rest; divergence (detected from segment exponents) yields `+inf`.
pub(crate) fn f_weighted_integral(
    w: &Weight,
    rho: f64,
    sigma: f64,
    mu: f64,
    density: bool,
    rel_tol: f64,
) -> f64 {
    let mut total = 0.0f64;
    for seg in segments(w, rho) {
        if density && seg.coeff == 0.0 {
            continue;
        }
        let contribution = segment_integral(&seg, sigma, mu, density, rel_tol);
        if contribution.is_infinite() {
            return f64::INFINITY;
        }
        total += contribution;
    }
    total
}

fn segment_integral(seg: &Seg, sigma: f64, mu: f64, density: bool, rel_tol: f64) -> f64 {
    if seg.f_start.is_infinite() {
        // F = inf on the whole segment: F^sigma is 0 / 1 / inf
        let fpow = f64::INFINITY.powf(sigma);
        if fpow == 0.0 {
            return 0.0;
        }
        if sigma == 0.0 {
            let e = if density { mu + seg.vexp } else { mu };
            let c = if density { seg.coeff } else { 1.0 };
            return xmul(c, power_primitive_diff(e, seg.lo, seg.hi));
        }
        return f64::INFINITY;
    }
    if seg.coeff == 0.0 {
        // constant F on a gap (density integrals skip gaps before this point)
        let k = seg.f_start.powf(sigma);
        if k == 0.0 {
            return 0.0;
        }
        return xmul(k, power_primitive_diff(mu, seg.lo, seg.hi));
    }
    let c_pow = seg.coeff / if seg.m != 0.0 { seg.m } else { 1.0 };
    let lo_m = if seg.lo == 0.0 { 0.0 } else { seg.lo.powf(seg.m) };
    let b_off = seg.f_start - if seg.m != 0.0 { c_pow * lo_m } else { 0.0 };
    if seg.m != 0.0 && b_off == 0.0 {
        // F = (A/m) t^m exactly: pure power closed form
        let e = mu + sigma * seg.m + if density { seg.vexp } else { 0.0 };
        let c = c_pow.powf(sigma) * if density { seg.coeff } else { 1.0 };
        return xmul(c, power_primitive_diff(e, seg.lo, seg.hi));
    }
    // general segment: certified quadrature with divergence analysis first
    let g = |t: f64| -> f64 {
        let f = seg.f_at(t).max(0.0);
        let fs = f.powf(sigma);
        if fs == 0.0 {
            return 0.0;
        }
        let dens = if density { seg.coeff * t.powf(seg.vexp) } else { 1.0 };
        xmul(xmul(t.powf(mu), fs), dens)
    };
    if seg.hi.is_finite() {
        // only possible endpoint singularity: F(lo) = 0 with sigma < 0
        if seg.f_start == 0.0 && sigma <= -1.0 {
            return f64::INFINITY;
        }
        return quad::tanh_sinh(&g, seg.lo, seg.hi, rel_tol).value;
    }
    // infinite tail: decide convergence from the asymptotic exponent
    let dens_exp = if density { seg.vexp } else { 0.0 };
    let diverges = if seg.m > 0.0 {
        mu + sigma * seg.m + dens_exp >= -1.0
    } else if seg.m == 0.0 {
        // F ~ A ln t
        let e = mu + dens_exp;
        e > -1.0 || (e == -1.0 && sigma >= -1.0)
    } else {
        // F -> const
        mu + dens_exp >= -1.0
    };
    if diverges {
        return f64::INFINITY;
    }
    let start = if seg.lo > 0.0 { seg.lo } else { 1.0 };
    let mut total = 0.0;
    if seg.lo < start {
        total += quad::tanh_sinh(&g, seg.lo, start, rel_tol).value;
    }
    total += quad::integral_to_inf_power(&g, start, rel_tol).value;
    total
}
