//! The epsilon-splitting of the half-line and the induced rank-N bounds on
//! approximation numbers.
//!
//! The sweep splits on the regime's *upper* local-norm sandwich `K_upper`:
//! `K(I_n) <= K_upper(I_n) <= eps` is all the rank-bound argument uses, at
//! the cost of a possibly larger `N`.

use crate::criteria::{self, Compactness, Decision};
use crate::error::{Error, Result};
use crate::localnorm::{k_upper, Interval};
use crate::params::{Regime, SpaceParams};
use crate::quad;
use crate::weights::Weight;
use serde::Serialize;

/// accepted band: K_upper(I_n) in [eps (1 - BISECT_REL), eps]
const BISECT_REL: f64 = 1e-6;
/// absolute tolerance on log(endpoint)
const BISECT_LOG_TOL: f64 = 1e-8;
const MAX_INTERVALS: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    pub epsilon: f64,
    /// `c_0 = 0 < c_1 < ... < c_{N+1} = inf`
    pub points: Vec<f64>,
    /// `K_upper(I_n)` per interval (`points.len() - 1` entries)
    pub upper_bounds: Vec<f64>,
    /// `N`: number of interior split points
    pub n_splits: usize,
    /// the split is computed on the upper sandwich, not on `K` itself
    pub surrogate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnCurveRow {
    pub epsilon: f64,
    pub n_splits: usize,
    /// `n = N + 1`: the approximation-number index being bounded
    pub n: usize,
    pub bound: f64,
}

fn ensure_compact(params: &SpaceParams, w: &Weight) -> Result<()> {
    let report = criteria::norm_criterion(params, w)?;
    if report.decision != Decision::Bounded {
        return Err(Error::NotCompact("operator is not bounded".into()));
    }
    match params.regime {
        Regime::I | Regime::V => {
            if report.compactness != Compactness::Compact {
                return Err(Error::NotCompact("boundedness quantity does not vanish at 0/inf".into()));
            }
        }
        Regime::II | Regime::III | Regime::IV => {} // bounded implies compact
        Regime::VI | Regime::VII => {
            return Err(Error::Regime("partition needs 1 <= p, q < inf".into()));
        }
    }
    Ok(())
}

/// Largest `b > c` with `K_upper((c, b)) <= eps`, by bisection in `log b`.
fn next_point_right(c: f64, eps: f64, params: &SpaceParams, w: &Weight) -> Result<(f64, f64)> {
    let ku = |b: f64| -> Result<f64> { k_upper(Interval::new(c, b)?, params, w) };
    // lower bracket: shrink until below eps
    let mut lo = if c > 0.0 { c * 2.0 } else { w.support_lo().max(2.0f64.powi(-20)).min(1.0) };
    let mut lo_val = ku(lo)?;
    let mut guard = 0;
    while lo_val > eps {
        lo = if c > 0.0 { c + (lo - c) * 0.5 } else { lo * 0.5 };
        lo_val = ku(lo)?;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Precondition("bisection bracket collapse (lower)".into()));
        }
    }
    // upper bracket: grow until above eps (the caller has checked that the
    // tail value exceeds eps, so this terminates)
    let mut hi = lo * 2.0;
    let mut guard = 0;
    while ku(hi)? <= eps {
        lo = hi;
        lo_val = ku(lo)?;
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Precondition("bisection bracket collapse (upper)".into()));
        }
    }
    // bisection in log-scale; keep the admissible side
    for _ in 0..200 {
        if lo_val >= eps * (1.0 - BISECT_REL) || (hi.ln() - lo.ln()).abs() < BISECT_LOG_TOL {
            break;
        }
        let mid = (lo.ln() + 0.5 * (hi.ln() - lo.ln())).exp();
        let v = ku(mid)?;
        if v <= eps {
            lo = mid;
            lo_val = v;
        } else {
            hi = mid;
        }
    }
    Ok((lo, lo_val))
}

/// Smallest `a < b` with `K_upper((a, b)) <= eps` (right-to-left sweep).
fn next_point_left(b: f64, eps: f64, params: &SpaceParams, w: &Weight) -> Result<(f64, f64)> {
    let ku = |a: f64| -> Result<f64> { k_upper(Interval::new(a, b)?, params, w) };
    // admissible bracket near b
    let mut hi = if b.is_finite() {
        b * 0.5
    } else {
        let s = w.support_hi();
        if s.is_finite() {
            s.max(1.0)
        } else {
            1.0
        }
    };
    let mut hi_val = ku(hi)?;
    let mut guard = 0;
    while hi_val > eps {
        hi = if b.is_finite() { b - (b - hi) * 0.5 } else { hi * 2.0 };
        hi_val = ku(hi)?;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Precondition("bisection bracket collapse (upper)".into()));
        }
    }
    // inadmissible side towards 0
    let mut lo = hi * 0.5;
    let mut guard = 0;
    while ku(lo)? <= eps {
        hi = lo;
        hi_val = ku(hi)?;
        lo *= 0.5;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Precondition("bisection bracket collapse (lower)".into()));
        }
    }
    for _ in 0..200 {
        if hi_val >= eps * (1.0 - BISECT_REL) || (hi.ln() - lo.ln()).abs() < BISECT_LOG_TOL {
            break;
        }
        let mid = (lo.ln() + 0.5 * (hi.ln() - lo.ln())).exp();
        let v = ku(mid)?;
        if v <= eps {
            hi = mid;
            hi_val = v;
        } else {
            lo = mid;
        }
    }
    Ok((hi, hi_val))
}

/// Greedy epsilon-split of `(0, inf)`.
///
/// For `q >= 1` the sweep runs left to right and the terminal slack
/// interval is the last one; for `q < 1` it runs right to left and the
/// slack interval is the first.
pub fn split(eps: f64, params: &SpaceParams, w: &Weight) -> Result<Partition> {
    if !(eps > 0.0) {
        return Err(Error::Argument(format!("split needs eps > 0, got {eps}")));
    }
    ensure_compact(params, w)?;
    let whole = k_upper(Interval::whole(), params, w)?;
    if whole <= eps {
        return Ok(Partition {
            epsilon: eps,
            points: vec![0.0, f64::INFINITY],
            upper_bounds: vec![whole],
            n_splits: 0,
            surrogate: true,
        });
    }
    if params.q >= 1.0 {
        let mut points = vec![0.0];
        let mut bounds = Vec::new();
        loop {
            let c = *points.last().unwrap();
            let tail_val = k_upper(Interval::new(c, f64::INFINITY)?, params, w)?;
            if tail_val <= eps {
                points.push(f64::INFINITY);
                bounds.push(tail_val);
                break;
            }
            let (b, val) = next_point_right(c, eps, params, w)?;
            if b <= c {
                return Err(Error::Precondition("split made no progress".into()));
            }
            points.push(b);
            bounds.push(val);
            if points.len() > MAX_INTERVALS {
                return Err(Error::Precondition("split exceeded the interval budget".into()));
            }
        }
        let n_splits = points.len() - 2;
        Ok(Partition { epsilon: eps, points, upper_bounds: bounds, n_splits, surrogate: true })
    } else {
        let mut points = vec![f64::INFINITY];
        let mut bounds = Vec::new();
        loop {
            let b = points[0];
            let head_val = k_upper(Interval::new(0.0, b)?, params, w)?;
            if head_val <= eps {
                points.insert(0, 0.0);
                bounds.insert(0, head_val);
                break;
            }
            let (a, val) = next_point_left(b, eps, params, w)?;
            if a >= b {
                return Err(Error::Precondition("split made no progress".into()));
            }
            points.insert(0, a);
            bounds.insert(0, val);
            if points.len() > MAX_INTERVALS {
                return Err(Error::Precondition("split exceeded the interval budget".into()));
            }
        }
        let n_splits = points.len() - 2;
        Ok(Partition { epsilon: eps, points, upper_bounds: bounds, n_splits, surrogate: true })
    }
}

/// `Pf(x) = Σ_n e^{-x c_{n+1}^λ} ∫_{I_n} f v dy`; the final interval pairs
/// with `c_{N+1} = inf` and contributes nothing.
pub fn apply_finite_rank<F: Fn(f64) -> f64>(
    part: &Partition,
    f: F,
    x: f64,
    lambda: f64,
    w: &Weight,
) -> f64 {
    let mut total = 0.0;
    for n in 0..part.points.len() - 1 {
        let c_next = part.points[n + 1];
        if c_next.is_infinite() {
            continue;
        }
        let factor = (-x * c_next.powf(lambda)).exp();
        if factor == 0.0 {
            continue;
        }
        let (lo, hi) = (part.points[n], c_next);
        let mut cuts = vec![lo];
        cuts.extend(w.breakpoints_in(lo, hi));
        cuts.push(hi);
        let mut integral = 0.0;
        for pair in cuts.windows(2) {
            integral += quad::adaptive_gk(&|y: f64| f(y) * w.eval(y), pair[0], pair[1], 1e-10, 1e-300).value;
        }
        total += factor * integral;
    }
    total
}

/// Rank-based upper bound for `a_{N+1}(L)` implied by the partition.
pub fn an_upper(part: &Partition, params: &SpaceParams) -> Result<f64> {
    let n1 = (part.n_splits + 1) as f64;
    match params.regime {
        Regime::V => Ok(part.epsilon),
        Regime::I | Regime::II => Ok(part.epsilon * n1.powf(1.0 / params.p_conj)),
        Regime::III | Regime::IV => {
            let r = params.r.expect("q < 1 regimes have r");
            Ok(part.epsilon * n1.powf(1.0 / r))
        }
        Regime::VI | Regime::VII => Err(Error::Regime("an_upper needs 1 <= p, q < inf".into())),
    }
}

/// Sweeps `split` over a decreasing epsilon grid.
pub fn an_curve(eps_grid: &[f64], params: &SpaceParams, w: &Weight) -> Result<Vec<AnCurveRow>> {
    if eps_grid.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::Argument("epsilon grid must be strictly decreasing".into()));
    }
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let part = split(eps, params, w)?;
        let bound = an_upper(&part, params)?;
        rows.push(AnCurveRow { epsilon: eps, n_splits: part.n_splits, n: part.n_splits + 1, bound });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derived_params;
    use approx::assert_relative_eq;

    fn w1() -> Weight {
        Weight::power(1.0, 1.0, 0.0, 1.0).unwrap()
    }

    fn p22() -> SpaceParams {
        derived_params(2.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn trivial_partition_when_eps_dominates() {
        // K_upper(whole line) = 2 * 3^{-1/2} ~ 1.1547
        let part = split(1.2, &p22(), &w1()).unwrap();
        assert_eq!(part.points, vec![0.0, f64::INFINITY]);
        assert_eq!(part.n_splits, 0);
        assert!(part.surrogate);
    }

    #[test]
    fn split_bands_hold() {
        let eps = 0.2;
        let part = split(eps, &p22(), &w1()).unwrap();
        assert!(part.points.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(part.points[0], 0.0);
        assert!(part.points.last().unwrap().is_infinite());
        let n = part.upper_bounds.len();
        for (i, &u) in part.upper_bounds.iter().enumerate() {
            assert!(u <= eps * (1.0 + 1e-9), "interval {i}: {u} > eps");
            if i + 1 < n {
                assert!(u >= eps * (1.0 - 1e-5), "interval {i}: {u} too small");
            }
        }
        // frozen fixture: the sweep at eps = 0.2 yields N = 4
        assert_eq!(part.n_splits, 4);
    }

    #[test]
    fn halving_eps_never_decreases_n() {
        let n1 = split(0.4, &p22(), &w1()).unwrap().n_splits;
        let n2 = split(0.2, &p22(), &w1()).unwrap().n_splits;
        let n3 = split(0.1, &p22(), &w1()).unwrap().n_splits;
        assert!(n2 >= n1 && n3 >= n2, "{n1} {n2} {n3}");
    }

    #[test]
    fn refinement_property() {
        let coarse = split(0.4, &p22(), &w1()).unwrap();
        let fine = split(0.2, &p22(), &w1()).unwrap();
        for pair in coarse.points.windows(2) {
            let contains_fine_point = fine
                .points
                .iter()
                .any(|&c| c > pair[0] && c < pair[1] && c.is_finite());
            let nested_in_fine = fine
                .points
                .windows(2)
                .any(|f| f[0] <= pair[0] && pair[1] <= f[1]);
            assert!(contains_fine_point || nested_in_fine);
        }
    }

    #[test]
    fn an_upper_arithmetic() {
        let p1 = derived_params(1.0, 2.0, 1.0).unwrap();
        let mk = |n_splits: usize, eps: f64| Partition {
            epsilon: eps,
            points: vec![0.0; n_splits + 2],
            upper_bounds: vec![eps; n_splits + 1],
            n_splits,
            surrogate: true,
        };
        assert_relative_eq!(an_upper(&mk(7, 0.3), &p1).unwrap(), 0.3);
        assert_relative_eq!(an_upper(&mk(3, 0.1), &p22()).unwrap(), 0.2, max_relative = 1e-15);
        let p_half = derived_params(2.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(
            an_upper(&mk(1, 0.1), &p_half).unwrap(),
            0.1 * 2.0f64.powf(1.5),
            max_relative = 1e-15
        );
    }

    #[test]
    fn finite_rank_application() {
        let part = Partition {
            epsilon: 0.5,
            points: vec![0.0, 1.0, f64::INFINITY],
            upper_bounds: vec![0.5, 0.0],
            n_splits: 1,
            surrogate: true,
        };
        let chi = |y: f64| if y < 1.0 { 1.0 } else { 0.0 };
        let v = apply_finite_rank(&part, chi, 1.0, 1.0, &w1());
        assert_relative_eq!(v, (-1.0f64).exp() / 2.0, max_relative = 1e-9);
        // trivial partition applies the zero operator
        let trivial = Partition {
            epsilon: 2.0,
            points: vec![0.0, f64::INFINITY],
            upper_bounds: vec![0.0],
            n_splits: 0,
            surrogate: true,
        };
        assert_eq!(apply_finite_rank(&trivial, chi, 1.0, 1.0, &w1()), 0.0);
        // linearity at a point
        let f = |y: f64| y;
        let g = |y: f64| (2.0 * y).sin();
        let both = apply_finite_rank(&part, |y| f(y) + g(y), 0.7, 1.0, &w1());
        let sum = apply_finite_rank(&part, f, 0.7, 1.0, &w1())
            + apply_finite_rank(&part, g, 0.7, 1.0, &w1());
        assert_relative_eq!(both, sum, max_relative = 1e-9);
    }

    #[test]
    fn split_rejects_non_compact() {
        let w = Weight::constant(1.0, 0.0, f64::INFINITY).unwrap();
        assert!(split(0.5, &p22(), &w).is_err());
    }

    #[test]
    fn quasi_banach_sweep_orientation() {
        // q < 1: slack interval is the first one. W1 itself is unbounded
        // into L^{1/2}; a faster-vanishing weight is needed here.
        let p = derived_params(2.0, 0.5, 1.0).unwrap();
        let w = Weight::power(1.0, 3.0, 0.0, 1.0).unwrap();
        let part = split(0.9, &p, &w).unwrap();
        assert!(part.points.windows(2).all(|c| c[0] < c[1]));
        let n = part.upper_bounds.len();
        if n > 1 {
            for (i, &u) in part.upper_bounds.iter().enumerate() {
                assert!(u <= part.epsilon * (1.0 + 1e-9));
                if i > 0 {
                    assert!(u >= part.epsilon * (1.0 - 1e-5), "interval {i} of {n}: {u}");
                }
            }
        }
    }
}
