//! Independent ground truth: dense discretization of the operator (and of
//! its local / residual variants), singular values for the Hilbert case,
//! and certified lower bounds on general `(p, q)` operator norms.

use crate::criteria::{self, Decision};
use crate::error::{Error, Result};
use crate::localnorm::Interval;
use crate::params::SpaceParams;
use crate::partition::Partition;
use crate::quad;
use crate::weights::Weight;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Gauss-Legendre 4 nodes / weights on [-1, 1].
const GL_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_W: [f64; 4] = [
    0.347_854_845_137_453_86,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_86,
];

/// Grid request; omitted windows are derived from the weight support and
/// the kernel decay.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub n_x: usize,
    pub n_y: usize,
    pub y_lo: Option<f64>,
    pub y_hi: Option<f64>,
    pub x_lo: Option<f64>,
    pub x_hi: Option<f64>,
}

impl GridSpec {
    pub fn square(n: usize) -> Self {
        GridSpec { n_x: n, n_y: n, y_lo: None, y_hi: None, x_lo: None, x_hi: None }
    }
}

/// Log-spaced composite Gauss-Legendre nodes and weights for `∫_lo^hi`.
fn log_gl_grid(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(lo > 0.0 && hi > lo && n >= 4);
    let panels = (n / 4).max(1);
    let (la, lb) = (lo.ln(), hi.ln());
    let dh = (lb - la) / panels as f64;
    let mut xs = Vec::with_capacity(panels * 4);
    let mut ws = Vec::with_capacity(panels * 4);
    for p in 0..panels {
        let a = la + dh * p as f64;
        let mid = a + 0.5 * dh;
        let half = 0.5 * dh;
        for (xi, wi) in GL_X.iter().zip(GL_W) {
            let u = mid + half * xi;
            let x = u.exp();
            xs.push(x);
            ws.push(x * half * wi); // du-weight times dx/du = e^u
        }
    }
    (xs, ws)
}

#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub wx: Vec<f64>,
    pub wy: Vec<f64>,
    /// `kernel[(i, j)] = k(x_i, y_j) v(y_j)` without quadrature weights
    pub kernel: DMatrix<f64>,
    /// Hilbert-Schmidt bound on the mass dropped by the truncation window
    /// (`+inf` when the operator is not Hilbert-Schmidt).
    pub truncation_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormEstimate {
    /// certified lower bound on the discretized norm (exact for the dual
    /// shortcut cases)
    pub value: f64,
    pub method: &'static str,
    pub iterations: usize,
}

fn resolve_windows(w: &Weight, lambda: f64, spec: &GridSpec) -> (f64, f64, f64, f64) {
    let slo = w.support_lo();
    let shi = w.support_hi();
    let y_lo = spec.y_lo.unwrap_or_else(|| if slo > 0.0 { slo } else { 2.0f64.powi(-20) });
    let y_hi = spec.y_hi.unwrap_or_else(|| {
        if shi.is_finite() && shi > y_lo {
            shi
        } else {
            2.0f64.powi(20)
        }
    });
    // the head window must be deep: near x = 0 the squared-kernel mass per
    // unit x is ~ ∫v^2, so x_lo controls the dominant truncation term
    let x_lo = spec.x_lo.unwrap_or(y_hi.powf(-lambda) * 2.0f64.powi(-18));
    let x_hi = spec.x_hi.unwrap_or(32.0 * y_lo.powf(-lambda));
    (y_lo, y_hi, x_lo, x_hi)
}

/// HS bound on the kernel mass outside the truncation window.
fn hs_truncation(w: &Weight, lambda: f64, win: (f64, f64, f64, f64)) -> f64 {
    let (y_lo, y_hi, x_lo, x_hi) = win;
    let mut total = 0.0f64;
    // y outside the window, all x
    if let Ok(v) = w.restrict(0.0, y_lo) {
        total += v.moment_integral(2.0, -lambda, 0.0, f64::INFINITY).unwrap_or(f64::INFINITY) * 0.5;
    }
    if let Ok(v) = w.restrict(y_hi, f64::INFINITY) {
        total += v.moment_integral(2.0, -lambda, 0.0, f64::INFINITY).unwrap_or(f64::INFINITY) * 0.5;
    }
    if total.is_infinite() {
        return f64::INFINITY;
    }
    // y inside, x truncated on both sides
    let g = |y: f64| {
        let vy = w.eval(y);
        if vy == 0.0 {
            return 0.0;
        }
        let yl = y.powf(lambda);
        let head = (1.0 - (-2.0 * x_lo * yl).exp()) / (2.0 * yl);
        let tail = (-2.0 * x_hi * yl).exp() / (2.0 * yl);
        vy * vy * (head + tail)
    };
    let mut cuts = vec![y_lo];
    cuts.extend(w.breakpoints_in(y_lo, y_hi));
    cuts.push(y_hi);
    for pair in cuts.windows(2) {
        total += quad::adaptive_gk(&g, pair[0], pair[1], 1e-8, 1e-300).value;
    }
    total.max(0.0).sqrt()
}

fn assemble(
    x: Vec<f64>,
    wx: Vec<f64>,
    y: Vec<f64>,
    wy: Vec<f64>,
    kernel_fn: impl Fn(f64, f64) -> f64 + Sync,
    truncation_error: f64,
) -> DiscretizedOperator {
    let (nx, ny) = (x.len(), y.len());
    let mut kernel = DMatrix::zeros(nx, ny);
    // column-major storage: parallelize over columns
    kernel
        .as_mut_slice()
        .par_chunks_mut(nx)
        .enumerate()
        .for_each(|(j, col)| {
            let yj = y[j];
            for (i, slot) in col.iter_mut().enumerate() {
                *slot = kernel_fn(x[i], yj);
            }
        });
    DiscretizedOperator { x, wx, y, wy, kernel, truncation_error }
}

/// Dense discretization of the full operator on log-spaced grids.
pub fn discretize(params: &SpaceParams, w: &Weight, spec: &GridSpec) -> Result<DiscretizedOperator> {
    let report = criteria::norm_criterion(params, w)?;
    if report.decision == Decision::Unbounded {
        return Err(Error::Precondition("cannot discretize an unbounded operator".into()));
    }
    let lambda = params.lambda;
    let win = resolve_windows(w, lambda, spec);
    let (y_lo, y_hi, x_lo, x_hi) = win;
    let (y, wy) = log_gl_grid(y_lo, y_hi, spec.n_y);
    let (x, wx) = log_gl_grid(x_lo, x_hi, spec.n_x);
    let trunc = hs_truncation(w, lambda, win);
    let wv = w.clone();
    Ok(assemble(
        x,
        wx,
        y,
        wy,
        move |xi, yj| (-xi * yj.powf(lambda)).exp() * wv.eval(yj),
        trunc,
    ))
}

/// Discretization of the local operator `L_I` (kernel
/// `e^{-x y^λ} - e^{-x b^λ}` on `y in I`).
pub fn discretize_local(
    params: &SpaceParams,
    w: &Weight,
    iv: Interval,
    spec: &GridSpec,
) -> Result<DiscretizedOperator> {
    let lambda = params.lambda;
    let wr = w.restrict(iv.a, iv.b)?;
    if wr.is_zero() {
        return Err(Error::Precondition("weight vanishes on the interval".into()));
    }
    let mut spec = *spec;
    spec.y_lo = Some(spec.y_lo.unwrap_or(wr.support_lo().max(2.0f64.powi(-20))).max(iv.a));
    spec.y_hi = Some(match spec.y_hi {
        Some(v) => v.min(iv.b),
        None => {
            let s = wr.support_hi();
            if s.is_finite() {
                s
            } else {
                2.0f64.powi(20)
            }
        }
    });
    let win = resolve_windows(&wr, lambda, &spec);
    let (y_lo, y_hi, x_lo, x_hi) = win;
    let (y, wy) = log_gl_grid(y_lo, y_hi, spec.n_y);
    let (x, wx) = log_gl_grid(x_lo, x_hi, spec.n_x);
    let trunc = hs_truncation(&wr, lambda, win);
    let b = iv.b;
    Ok(assemble(
        x,
        wx,
        y,
        wy,
        move |xi, yj| {
            let head = (-xi * yj.powf(lambda)).exp();
            let tail = if b.is_finite() { (-xi * b.powf(lambda)).exp() } else { 0.0 };
            (head - tail).max(0.0) * wr.eval(yj)
        },
        trunc,
    ))
}

/// Discretization of the residual `L - P` for a partition-induced rank-N
/// approximant: kernel `[e^{-x y^λ} - e^{-x c_{n(y)+1}^λ}] v(y)`.
pub fn discretize_residual(
    params: &SpaceParams,
    w: &Weight,
    part: &Partition,
    spec: &GridSpec,
) -> Result<DiscretizedOperator> {
    let lambda = params.lambda;
    let win = resolve_windows(w, lambda, spec);
    let (y_lo, y_hi, x_lo, x_hi) = win;
    let (y, wy) = log_gl_grid(y_lo, y_hi, spec.n_y);
    let (x, wx) = log_gl_grid(x_lo, x_hi, spec.n_x);
    let trunc = hs_truncation(w, lambda, win);
    let points = part.points.clone();
    let wv = w.clone();
    Ok(assemble(
        x,
        wx,
        y,
        wy,
        move |xi, yj| {
            let next = points
                .windows(2)
                .find(|c| yj >= c[0] && yj < c[1])
                .map(|c| c[1])
                .unwrap_or(f64::INFINITY);
            let head = (-xi * yj.powf(lambda)).exp();
            let tail = if next.is_finite() { (-xi * next.powf(lambda)).exp() } else { 0.0 };
            (head - tail) * wv.eval(yj)
        },
        trunc,
    ))
}

/// Uniform-panel discretization of the constant-weight Volterra/Hardy
/// operator `H f(t) = zeta ∫_a^t f(y) xi dy` on a finite interval.
pub fn discretize_volterra(xi: f64, zeta: f64, iv: Interval, n: usize) -> Result<DiscretizedOperator> {
    if !iv.b.is_finite() {
        return Err(Error::Argument("volterra fixture needs a finite interval".into()));
    }
    let panels = (n / 4).max(1);
    let dh = (iv.b - iv.a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * 4);
    let mut ws = Vec::with_capacity(panels * 4);
    for p in 0..panels {
        let a = iv.a + dh * p as f64;
        let mid = a + 0.5 * dh;
        let half = 0.5 * dh;
        for (gx, gw) in GL_X.iter().zip(GL_W) {
            xs.push(mid + half * gx);
            ws.push(half * gw);
        }
    }
    let (x, wx) = (xs.clone(), ws.clone());
    Ok(assemble(
        x,
        wx,
        xs,
        ws,
        move |t, yj| if yj < t { xi * zeta } else { 0.0 },
        0.0,
    ))
}

impl DiscretizedOperator {
    /// Symmetric scaling `M = Dx^{1/2} K Dy^{1/2}`: singular values of `M`
    /// approximate the singular values of the operator.
    pub fn scaled_matrix(&self) -> DMatrix<f64> {
        let (nx, ny) = (self.x.len(), self.y.len());
        let mut m = self.kernel.clone();
        for j in 0..ny {
            let cw = self.wy[j].sqrt();
            for i in 0..nx {
                m[(i, j)] *= self.wx[i].sqrt() * cw;
            }
        }
        m
    }

    /// Discrete Hilbert-Schmidt norm.
    pub fn hs_norm(&self) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.y.len() {
            for i in 0..self.x.len() {
                let k = self.kernel[(i, j)];
                sum += self.wx[i] * self.wy[j] * k * k;
            }
        }
        sum.sqrt()
    }

    /// Leading singular values (dense SVD, descending).
    pub fn singular_values(&self, count: usize) -> Vec<f64> {
        let m = self.scaled_matrix();
        let svd = m
            .try_svd_unordered(false, false, f64::EPSILON, 0)
            .expect("svd of a finite matrix converges");
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s.truncate(count);
        s
    }

    fn apply(&self, f: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.x.len(), self.y.len());
        let mut out = vec![0.0; nx];
        for j in 0..ny {
            let fj = f[j] * self.wy[j];
            if fj == 0.0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.kernel[(i, j)] * fj;
            }
        }
        out
    }

    fn apply_adjoint(&self, g: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.x.len(), self.y.len());
        let mut out = vec![0.0; ny];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..nx {
                acc += self.kernel[(i, j)] * self.wx[i] * g[i];
            }
            *o = acc;
        }
        out
    }

    fn norm_q(&self, g: &[f64], q: f64) -> f64 {
        if q.is_infinite() {
            return g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        g.iter()
            .zip(&self.wx)
            .map(|(v, w)| w * v.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    fn norm_p_y(&self, f: &[f64], p: f64) -> f64 {
        if p.is_infinite() {
            return f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        }
        f.iter()
            .zip(&self.wy)
            .map(|(v, w)| w * v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// Lower-bound certificate for the discrete `L^p -> L^q` norm.
    ///
    /// Exact dual shortcuts: `p = inf` (extremal `f = 1`), `p = 1`
    /// (extremal point mass), `q = 1 < p` (Hoelder equality). Otherwise
    /// multi-start ascent `f <- (A* (Af)^{q-1})^{p'-1}`; for `q < 1` the
    /// iteration stays in the nonnegative cone and the best visited value
    /// is reported (lower bound only).
    pub fn operator_norm_pq(&self, p: f64, q: f64, restarts: usize, seed: u64) -> NormEstimate {
        let ny = self.y.len();
        if p.is_infinite() {
            let ones = vec![1.0; ny];
            let g = self.apply(&ones);
            return NormEstimate { value: self.norm_q(&g, q), method: "exact-dual", iterations: 0 };
        }
        if p == 1.0 {
            // extremal normalized point masses: max over columns
            let mut best = 0.0f64;
            for j in 0..ny {
                let col: Vec<f64> = (0..self.x.len()).map(|i| self.kernel[(i, j)]).collect();
                best = best.max(self.norm_q(&col, q));
            }
            return NormEstimate { value: best, method: "exact-dual", iterations: 0 };
        }
        let p_conj = p / (p - 1.0);
        if q == 1.0 {
            let h = self.apply_adjoint(&vec![1.0; self.x.len()]);
            let value = h
                .iter()
                .zip(&self.wy)
                .map(|(v, w)| w * v.powf(p_conj))
                .sum::<f64>()
                .powf(1.0 / p_conj);
            return NormEstimate { value, method: "exact-dual", iterations: 0 };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0.0f64;
        let mut total_iters = 0usize;
        for _ in 0..restarts.max(1) {
            let mut f: Vec<f64> = (0..ny).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let nf = self.norm_p_y(&f, p);
            f.iter_mut().for_each(|v| *v /= nf);
            let mut prev = 0.0f64;
            for it in 0..400 {
                total_iters = it;
                let g = self.apply(&f);
                let r = self.norm_q(&g, q);
                best = best.max(r);
                if (r - prev).abs() <= 1e-13 * r.abs() && it > 3 {
                    break;
                }
                prev = r;
                let u: Vec<f64> = g.iter().map(|v| v.max(0.0).powf(q - 1.0).min(1e300)).collect();
                let h = self.apply_adjoint(&u);
                let mut fnew: Vec<f64> =
                    h.iter().map(|v| v.max(0.0).powf(p_conj - 1.0).min(1e300)).collect();
                let nf = self.norm_p_y(&fnew, p);
                if !(nf > 0.0) || !nf.is_finite() {
                    break;
                }
                fnew.iter_mut().for_each(|v| *v /= nf);
                f = fnew;
            }
        }
        NormEstimate { value: best, method: "ascent", iterations: total_iters }
    }
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
    fn hs_norm_matches_exact() {
        let op = discretize(&p22(), &w1(), &GridSpec::square(192)).unwrap();
        assert_relative_eq!(op.hs_norm(), 0.5, max_relative = 1e-4);
        assert!(op.truncation_error < 1e-3);
        let sum_sq: f64 = op.singular_values(192).iter().map(|s| s * s).sum();
        assert_relative_eq!(sum_sq, 0.25, max_relative = 1e-3);
    }

    #[test]
    fn grid_refinement_improves_hs() {
        let mut errs = Vec::new();
        for n in [64, 128, 256] {
            let op = discretize(&p22(), &w1(), &GridSpec::square(n)).unwrap();
            errs.push((op.hs_norm() - 0.5).abs());
        }
        assert!(errs[1] <= errs[0] && errs[2] <= errs[1], "{errs:?}");
    }

    #[test]
    fn volterra_spectrum() {
        // the step kernel limits composite GL to ~panel-width accuracy
        let iv = Interval::new(0.0, 1.0).unwrap();
        let op = discretize_volterra(1.0, 1.0, iv, 256).unwrap();
        let s = op.singular_values(3);
        for (n, sv) in s.iter().enumerate() {
            let exact = 2.0 / ((2.0 * n as f64 + 1.0) * std::f64::consts::PI);
            assert_relative_eq!(*sv, exact, max_relative = 8e-3);
        }
    }

    #[test]
    fn ascent_matches_svd_in_hilbert_case() {
        let op = discretize(&p22(), &w1(), &GridSpec::square(128)).unwrap();
        let top = op.singular_values(1)[0];
        let est = op.operator_norm_pq(2.0, 2.0, 3, 11);
        assert!(est.value <= top * (1.0 + 1e-9));
        assert_relative_eq!(est.value, top, max_relative = 1e-6);
    }

    #[test]
    fn rank_one_matrix_norm() {
        // kernel(x, y) = g(x) h(y): norm = ||g||_q ||h||_{p'}
        let iv = Interval::new(0.5, 2.0).unwrap();
        let op = {
            let (y, wy) = log_gl_grid(iv.a, iv.b, 64);
            let (x, wx) = log_gl_grid(iv.a, iv.b, 64);
            assemble(x, wx, y, wy, |x, y| (-x).exp() * y, 0.0)
        };
        let est = op.operator_norm_pq(2.0, 2.0, 2, 3);
        let gq = op.norm_q(&op.x.iter().map(|x| (-x).exp()).collect::<Vec<_>>(), 2.0);
        let hp = op
            .y
            .iter()
            .zip(&op.wy)
            .map(|(y, w)| w * y * y)
            .sum::<f64>()
            .sqrt();
        assert_relative_eq!(est.value, gq * hp, max_relative = 1e-8);
    }

    #[test]
    fn zero_weight_zero_matrix() {
        let w = Weight::zero();
        let op = discretize(&p22(), &w, &GridSpec::square(32)).unwrap();
        assert_eq!(op.hs_norm(), 0.0);
        assert!(op.singular_values(5).iter().all(|s| *s == 0.0));
    }

    #[test]
    fn local_operator_q1_exact_value() {
        // K((0,1)) = B_1 = 3^{-1/2} for p = 2, q = 1
        let p21 = derived_params(2.0, 1.0, 1.0).unwrap();
        let iv = Interval::new(0.0, 1.0).unwrap();
        let op = discretize_local(&p21, &w1(), iv, &GridSpec::square(192)).unwrap();
        let est = op.operator_norm_pq(2.0, 1.0, 1, 5);
        let exact = 3.0f64.powf(-0.5);
        assert!(est.value >= 0.98 * exact, "{} vs {exact}", est.value);
        assert!(est.value <= exact + 1e-6);
    }
}
