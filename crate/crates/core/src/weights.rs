//! Piecewise-power weights on the half-line.
//!
//! A weight is a finite, ordered list of disjoint pieces `c * y^beta` on
//! `[lo, hi)`; the weight vanishes off the union of the pieces. The family
//! is closed under `v^rho` and admits exact power integrals, moment
//! integrals and essential suprema over any interval, which is everything
//! the criterion quantities need.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub coeff: f64,
    pub exp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pieces: Vec<Piece>,
}

/// One segment of the running essential supremum `E(t) = esup_{a<x<t} v(x)`.
/// On `(t0, t1)` the value is `coeff * t^exp` (`exp = 0` encodes a constant).
#[derive(Debug, Clone, Copy)]
pub struct EsupSegment {
    pub t0: f64,
    pub t1: f64,
    pub coeff: f64,
    pub exp: f64,
}

impl Weight {
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        pieces.retain(|p| p.coeff != 0.0);
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for p in &pieces {
            if !(p.lo >= 0.0 && p.lo < p.hi) {
                return Err(Error::Weight(format!("piece [{}, {}) is empty or negative", p.lo, p.hi)));
            }
            if p.coeff < 0.0 || !p.coeff.is_finite() {
                return Err(Error::Weight(format!("coefficient {} must be finite and >= 0", p.coeff)));
            }
            if !p.exp.is_finite() {
                return Err(Error::Weight("exponent must be finite".into()));
            }
            if p.lo == 0.0 && p.exp <= -1.0 {
                return Err(Error::Weight(format!(
                    "piece touching 0 with exponent {} is not locally integrable",
                    p.exp
                )));
            }
        }
        for w in pieces.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(Error::Weight(format!(
                    "pieces [{}, {}) and [{}, {}) overlap",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
            if !w[0].hi.is_finite() {
                return Err(Error::Weight("only the last piece may extend to infinity".into()));
            }
        }
        Ok(Weight { pieces })
    }

    /// `c * y^beta` on `[lo, hi)`.
    pub fn power(coeff: f64, exp: f64, lo: f64, hi: f64) -> Result<Self> {
        Weight::new(vec![Piece { lo, hi, coeff, exp }])
    }

    /// Constant `c` on `[lo, hi)`.
    pub fn constant(coeff: f64, lo: f64, hi: f64) -> Result<Self> {
        Weight::power(coeff, 0.0, lo, hi)
    }

    pub fn zero() -> Self {
        Weight { pieces: Vec::new() }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Lower end of the support (0 for the zero weight by convention).
    pub fn support_lo(&self) -> f64 {
        self.pieces.first().map_or(0.0, |p| p.lo)
    }

    /// Upper end of the support.
    pub fn support_hi(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.hi)
    }

    /// Restriction `v * chi_(a,b)`.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let lo = p.lo.max(a);
                let hi = p.hi.min(b);
                (lo < hi).then_some(Piece { lo, hi, ..*p })
            })
            .collect();
        Weight::new(pieces)
    }

    /// Scaled weight `c * v`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        Weight::new(
            self.pieces
                .iter()
                .map(|p| Piece { coeff: c * p.coeff, ..*p })
                .collect(),
        )
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        for p in &self.pieces {
            if y >= p.lo && y < p.hi {
                return p.coeff * y.powf(p.exp);
            }
        }
        0.0
    }

    /// Upper-semicontinuous envelope: max of the one-sided limits at `y`.
    pub fn usc_eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut best: f64 = 0.0;
        for p in &self.pieces {
            if y >= p.lo && y < p.hi || y == p.hi {
                best = best.max(p.coeff * y.powf(p.exp));
            }
        }
        best
    }

    /// Exact `∫_a^b t^mu v^rho(t) dt`, `rho > 0`; `+inf` when divergent.
    pub fn moment_integral(&self, rho: f64, mu: f64, a: f64, b: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Argument(format!("moment integral needs rho > 0, got {rho}")));
        }
        if !(a >= 0.0 && a <= b) {
            return Err(Error::Argument(format!("bad integration interval ({a}, {b})")));
        }
        if a == b {
            return Ok(0.0);
        }
        let mut total = 0.0f64;
        for p in &self.pieces {
            let lo = p.lo.max(a);
            let hi = p.hi.min(b);
            if lo >= hi {
                continue;
            }
            let c = p.coeff.powf(rho);
            let e = rho * p.exp + mu;
            total += c * power_primitive_diff(e, lo, hi);
            if total.is_infinite() {
                return Ok(f64::INFINITY);
            }
        }
        Ok(total)
    }

    /// Exact `∫_a^b v^rho`, the building block of every criterion quantity.
    pub fn power_integral(&self, rho: f64, a: f64, b: f64) -> Result<f64> {
        self.moment_integral(rho, 0.0, a, b)
    }

    /// Essential supremum of `v` over `(a, b)`.
    pub fn esup(&self, a: f64, b: f64) -> f64 {
        let mut best: f64 = 0.0;
        for p in &self.pieces {
            let lo = p.lo.max(a);
            let hi = p.hi.min(b);
            if lo >= hi {
                continue;
            }
            best = best.max(piece_sup(p, lo, hi));
            if best.is_infinite() {
                return f64::INFINITY;
            }
        }
        best
    }

    /// Breakpoints of the piecewise structure that fall inside `(a, b)`.
    pub fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        for p in &self.pieces {
            for t in [p.lo, p.hi] {
                if t > a && t < b && t.is_finite() {
                    pts.push(t);
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Segments of the running esup `E(t) = esup_{a<x<t} v(x)` for `t > a`.
    ///
    /// The final segment always extends to infinity. A decreasing piece
    /// contributes its left-limit value as a constant; an increasing piece
    /// contributes a genuine power segment once it overtakes the running
    /// maximum.
    pub fn running_esup_segments(&self, a: f64) -> Vec<EsupSegment> {
        let mut segs: Vec<EsupSegment> = Vec::new();
        let mut cur = 0.0f64; // running max so far
        let mut t_cursor = a;
        let mut push = |segs: &mut Vec<EsupSegment>, t0: f64, t1: f64, coeff: f64, exp: f64| {
            if t1 > t0 {
                segs.push(EsupSegment { t0, t1, coeff, exp });
            }
        };
        for p in &self.pieces {
            if p.hi <= a {
                continue;
            }
            let lo = p.lo.max(a);
            if lo > t_cursor {
                // gap: running max stays flat
                push(&mut segs, t_cursor, lo, cur, 0.0);
                t_cursor = lo;
            }
            if p.exp > 0.0 {
                if p.coeff == 0.0 {
                    continue;
                }
                // overtakes cur at t_c
                let t_c = if cur == 0.0 { lo } else { (cur / p.coeff).powf(1.0 / p.exp).clamp(lo, p.hi) };
                push(&mut segs, t_cursor, t_c.max(t_cursor), cur, 0.0);
                let start = t_c.max(t_cursor);
                if start < p.hi {
                    push(&mut segs, start, p.hi, p.coeff, p.exp);
                    cur = if p.hi.is_finite() { p.coeff * p.hi.powf(p.exp) } else { f64::INFINITY };
                }
                t_cursor = t_cursor.max(p.hi.min(f64::MAX));
                if !p.hi.is_finite() {
                    t_cursor = f64::INFINITY;
                }
            } else {
                // non-increasing on the piece: value near the left end wins
                let left_val = if lo == 0.0 {
                    if p.exp < 0.0 { f64::INFINITY } else { p.coeff }
                } else {
                    p.coeff * lo.powf(p.exp)
                };
                let new = cur.max(left_val);
                push(&mut segs, t_cursor, p.hi, new, 0.0);
                cur = new;
                t_cursor = p.hi;
            }
            if t_cursor.is_infinite() {
                break;
            }
        }
        if t_cursor.is_finite() {
            segs.push(EsupSegment { t0: t_cursor, t1: f64::INFINITY, coeff: cur, exp: 0.0 });
        }
        // merge zero-length leading artifacts
        segs.retain(|s| s.t1 > s.t0);
        segs
    }
}

/// Supremum of one piece over `(lo, hi)` (closed form: monomials are monotone).
fn piece_sup(p: &Piece, lo: f64, hi: f64) -> f64 {
    if p.coeff == 0.0 {
        return 0.0;
    }
    if p.exp == 0.0 {
        p.coeff
    } else if p.exp > 0.0 {
        if hi.is_finite() { p.coeff * hi.powf(p.exp) } else { f64::INFINITY }
    } else if lo > 0.0 {
        p.coeff * lo.powf(p.exp)
    } else {
        f64::INFINITY
    }
}

/// `∫_lo^hi t^e dt` in closed form, `+inf` when divergent.
pub(crate) fn power_primitive_diff(e: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo < hi && lo >= 0.0);
    if e == -1.0 {
        if lo == 0.0 || hi.is_infinite() {
            return f64::INFINITY;
        }
        return (hi / lo).ln();
    }
    let k = e + 1.0;
    let hi_part = if hi.is_infinite() {
        if k > 0.0 {
            return f64::INFINITY;
        }
        0.0
    } else {
        hi.powf(k)
    };
    let lo_part = if lo == 0.0 {
        if k < 0.0 {
            return f64::INFINITY;
        }
        0.0
    } else {
        lo.powf(k)
    };
    (hi_part - lo_part) / k
}
