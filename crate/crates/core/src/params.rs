//! Lebesgue exponent pairs and their derived quantities.

use crate::error::{Error, Result};
use serde::Serialize;

/// Classification of the `(p, q)` exponent regime, matching the case tags
/// used throughout the reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `1 < p <= q < inf`
    I,
    /// `1 <= q < p < inf`
    II,
    /// `0 < q < 1 < p < inf`
    III,
    /// `0 < q < 1 = p`
    IV,
    /// `1 = p <= q < inf`
    V,
    /// `p = inf`, `0 < q < inf`
    VI,
    /// `q = inf`
    VII,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::I => "i",
            Regime::II => "ii",
            Regime::III => "iii",
            Regime::IV => "iv",
            Regime::V => "v",
            Regime::VI => "vi",
            Regime::VII => "vii",
        }
    }
}

/// Exponents `(p, q, lambda)` plus everything derived from them.
///
/// `p_conj` is `p/(p-1)` with the conventions `1' = inf`, `inf' = 1`;
/// `q_conj = q/(q-1)` is infinite at `q = 1` and negative for `q < 1`.
/// `r = pq/(p-q)` is populated only for `q < p < inf`; `theta = p'q/(p'+q)`;
/// `delta` is 1 for `q >= 1` and `q` otherwise.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpaceParams {
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub p_conj: f64,
    pub q_conj: f64,
    pub r: Option<f64>,
    pub theta: f64,
    pub delta: f64,
    pub regime: Regime,
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Builds the derived exponent set for `p in [1, inf]`, `q in (0, inf]`,
/// `lambda > 0`.
pub fn derived_params(p: f64, q: f64, lambda: f64) -> Result<SpaceParams> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Params(format!("lambda must be in (0, inf), got {lambda}")));
    }
    if p.is_nan() || !(p >= 1.0) {
        return Err(Error::Params(format!("p must be in [1, inf], got {p}")));
    }
    if q.is_nan() || !(q > 0.0) {
        return Err(Error::Params(format!("q must be in (0, inf], got {q}")));
    }
    let p_conj = conjugate(p);
    let q_conj = if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    };
    let r = if q < p && p.is_finite() { Some(p * q / (p - q)) } else { None };
    let theta = if q.is_infinite() {
        p_conj
    } else if p_conj.is_infinite() {
        q
    } else {
        p_conj * q / (p_conj + q)
    };
    let delta = if q >= 1.0 { 1.0 } else { q };
    let regime = if q.is_infinite() {
        Regime::VII
    } else if p.is_infinite() {
        Regime::VI
    } else if p == 1.0 {
        if q >= 1.0 {
            Regime::V
        } else {
            Regime::IV
        }
    } else if q >= p {
        Regime::I
    } else if q >= 1.0 {
        Regime::II
    } else {
        Regime::III
    };
    Ok(SpaceParams { p, q, lambda, p_conj, q_conj, r, theta, delta, regime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hilbert_case() {
        let sp = derived_params(2.0, 2.0, 1.0).unwrap();
        assert_eq!(sp.p_conj, 2.0);
        assert_eq!(sp.theta, 1.0);
        assert_eq!(sp.delta, 1.0);
        assert!(sp.r.is_none());
        assert_eq!(sp.regime, Regime::I);
    }

    #[test]
    fn super_diagonal_case() {
        let sp = derived_params(3.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(sp.p_conj, 1.5);
        assert_relative_eq!(sp.r.unwrap(), 6.0);
        assert_relative_eq!(sp.theta, 6.0 / 7.0, max_relative = 1e-15);
        assert_eq!(sp.regime, Regime::II);
    }

    #[test]
    fn quasi_banach_case() {
        let sp = derived_params(2.0, 0.5, 1.0).unwrap();
        assert_eq!(sp.delta, 0.5);
        assert_relative_eq!(sp.r.unwrap(), 2.0 / 3.0, max_relative = 1e-15);
        assert_eq!(sp.regime, Regime::III);
    }

    #[test]
    fn boundary_exponents() {
        assert_eq!(derived_params(1.0, 2.0, 1.0).unwrap().regime, Regime::V);
        assert_eq!(derived_params(1.0, 0.5, 1.0).unwrap().regime, Regime::IV);
        assert_eq!(derived_params(f64::INFINITY, 1.0, 1.0).unwrap().regime, Regime::VI);
        assert_eq!(derived_params(2.0, f64::INFINITY, 1.0).unwrap().regime, Regime::VII);
        // p = 1: r = q/(1-q) for q < 1
        let sp = derived_params(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(sp.r.unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(sp.theta, 0.5);
    }

    #[test]
    fn conjugate_identity() {
        for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
            let sp = derived_params(p, 2.0, 1.0).unwrap();
            if p > 1.0 {
                assert_relative_eq!(1.0 / sp.p + 1.0 / sp.p_conj, 1.0, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(derived_params(0.5, 2.0, 1.0).is_err());
        assert!(derived_params(2.0, 0.0, 1.0).is_err());
        assert!(derived_params(2.0, 2.0, 0.0).is_err());
        assert!(derived_params(2.0, 2.0, -1.0).is_err());
    }
}
