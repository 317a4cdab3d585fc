//! Deterministic derivative-free search used by every rate and bound.
//!
//! Each search starts with an exhaustive coarse grid (so the answer is never
//! worse than any grid sample) and then refines locally: golden-section
//! search in one dimension, cyclic coordinate descent with golden-section
//! line searches in two or three. Axes spanning several decades are searched
//! in log coordinates.

use crate::error::{check, Error, Result};

/// Knobs shared by all searches.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Coarse grid size for one-dimensional searches.
    pub coarse_points: usize,
    /// Coarse grid size per axis for two- and three-dimensional searches.
    /// Capped by `coarse_points`.
    pub nd_points: usize,
    /// Relative tolerance for the refinement stage.
    pub refine_tol: f64,
    /// Cap on golden-section iterations (1-D) or coordinate passes (n-D).
    pub max_refine_iters: usize,
    /// Smallest duty cycle searched when maximizing over `alpha`.
    pub alpha_min: f64,
    /// Largest peak ratio `A` searched; the smallest is `1 / a_max`.
    pub a_max: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_points: 512,
            nd_points: 64,
            refine_tol: 1e-9,
            max_refine_iters: 200,
            alpha_min: 1e-6,
            a_max: 1e4,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        check(self.coarse_points >= 8, "coarse_points", self.coarse_points as f64, ">= 8")?;
        check(self.nd_points >= 8, "nd_points", self.nd_points as f64, ">= 8")?;
        check(
            self.refine_tol > 0.0 && self.refine_tol < 1.0,
            "refine_tol",
            self.refine_tol,
            "0 < tol < 1",
        )?;
        check(
            self.alpha_min > 0.0 && self.alpha_min < 1.0,
            "alpha_min",
            self.alpha_min,
            "0 < alpha_min < 1",
        )?;
        check(self.a_max > 1.0 && self.a_max.is_finite(), "a_max", self.a_max, "finite, > 1")?;
        Ok(())
    }

    fn nd_grid(&self) -> usize {
        self.nd_points.min(self.coarse_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// A closed search interval and the coordinates it is searched in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub scale: Scale,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            scale: Scale::Linear,
        }
    }

    pub fn log(lo: f64, hi: f64) -> Self {
        debug_assert!(lo > 0.0);
        Self {
            lo,
            hi,
            scale: Scale::Log,
        }
    }

    /// Log-spaced when `lo > 0` and the interval spans more than two decades.
    pub fn auto(lo: f64, hi: f64) -> Self {
        if lo > 0.0 && hi / lo > 100.0 {
            Self::log(lo, hi)
        } else {
            Self::linear(lo, hi)
        }
    }

    fn to_t(&self, x: f64) -> f64 {
        match self.scale {
            Scale::Linear => x,
            Scale::Log => x.ln(),
        }
    }

    fn from_t(&self, t: f64) -> f64 {
        match self.scale {
            Scale::Linear => t,
            Scale::Log => t.exp(),
        }
    }

    fn t_bounds(&self) -> (f64, f64) {
        (self.to_t(self.lo), self.to_t(self.hi))
    }

    /// `n` grid points including both ends.
    fn grid_t(&self, n: usize) -> impl Iterator<Item = f64> {
        let (a, b) = self.t_bounds();
        let step = (b - a) / (n - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { b } else { a + step * i as f64 })
    }

    /// Grid point `x`, snapping the ends so log axes hit `lo` and `hi` exactly.
    fn x_at(&self, t: f64) -> f64 {
        let (a, b) = self.t_bounds();
        if t <= a {
            self.lo
        } else if t >= b {
            self.hi
        } else {
            self.from_t(t)
        }
    }

    fn check(&self) -> Result<()> {
        check(self.lo < self.hi, "axis.lo", self.lo, "lo < hi")?;
        if self.scale == Scale::Log {
            check(self.lo > 0.0, "axis.lo", self.lo, "> 0 on a log axis")?;
        }
        Ok(())
    }
}

/// Outcome of a search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Argmax or argmin, one coordinate per axis.
    pub arg: Vec<f64>,
    pub value: f64,
    /// False when the refinement budget ran out before the tolerance was met.
    pub converged: bool,
    pub evals: usize,
}

impl OptResult {
    pub fn x(&self) -> f64 {
        self.arg[0]
    }
}

// NaN never wins a comparison.
#[inline]
fn lower(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

struct Golden {
    t: f64,
    value: f64,
    converged: bool,
    evals: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `g` on `[a, b]`.
fn golden_min(mut g: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Golden {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = lower(g(c));
    let mut fd = lower(g(d));
    let mut evals = 2;
    let mut iters = 0;
    while (b - a) > tol && iters < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = lower(g(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = lower(g(d));
        }
        evals += 1;
        iters += 1;
    }
    let (t, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Golden {
        t,
        value,
        converged: (b - a) <= tol,
        evals,
    }
}

fn t_tol(cfg: &OptimizerConfig, t: f64) -> f64 {
    cfg.refine_tol * t.abs().max(1.0)
}

/// Minimizes `f` over one axis: coarse grid, then golden section between the
/// neighbours of the best grid point.
pub fn minimize_on(mut f: impl FnMut(f64) -> f64, axis: Axis, cfg: &OptimizerConfig) -> OptResult {
    assert!(axis.check().is_ok(), "invalid axis {axis:?}");
    let n = cfg.coarse_points.max(3);
    let ts: Vec<f64> = axis.grid_t(n).collect();
    let mut best = (0usize, f64::INFINITY);
    for (i, &t) in ts.iter().enumerate() {
        let v = lower(f(axis.x_at(t)));
        if v < best.1 || (i == 0 && v == f64::INFINITY) {
            best = (i, v);
        }
    }
    let (i, grid_value) = best;
    let a = ts[i.saturating_sub(1)];
    let b = ts[(i + 1).min(n - 1)];
    let gold = golden_min(
        |t| f(axis.x_at(t)),
        a,
        b,
        t_tol(cfg, ts[i]),
        cfg.max_refine_iters,
    );
    let evals = n + gold.evals;
    if gold.value < grid_value {
        OptResult {
            arg: vec![axis.x_at(gold.t)],
            value: gold.value,
            converged: gold.converged,
            evals,
        }
    } else {
        OptResult {
            arg: vec![axis.x_at(ts[i])],
            value: grid_value,
            converged: gold.converged,
            evals,
        }
    }
}

pub fn maximize_on(mut f: impl FnMut(f64) -> f64, axis: Axis, cfg: &OptimizerConfig) -> OptResult {
    let mut r = minimize_on(|x| -f(x), axis, cfg);
    r.value = -r.value;
    r
}

/// Maximizes `f` on `[lo, hi]`, log-spaced when the range spans more than two
/// decades and `lo > 0`.
pub fn maximize_1d(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, cfg: &OptimizerConfig) -> OptResult {
    maximize_on(f, Axis::auto(lo, hi), cfg)
}

/// Minimizes `f` over a box of two or three axes: full coarse grid, then
/// cyclic coordinate descent from the best grid point until a full pass
/// improves the value by less than `refine_tol` (relative).
pub fn minimize_nd(mut f: impl FnMut(&[f64]) -> f64, axes: &[Axis], cfg: &OptimizerConfig) -> OptResult {
    let n = axes.len();
    assert!(n >= 1, "at least one axis");
    for a in axes {
        assert!(a.check().is_ok(), "invalid axis {a:?}");
    }
    let m = cfg.nd_grid();
    let grids: Vec<Vec<f64>> = axes.iter().map(|a| a.grid_t(m).collect()).collect();

    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut best_idx = idx.clone();
    let mut best = f64::INFINITY;
    let mut evals = 0;
    let mut first = true;
    'grid: loop {
        for k in 0..n {
            x[k] = axes[k].x_at(grids[k][idx[k]]);
        }
        let v = lower(f(&x));
        evals += 1;
        if v < best || first {
            best = v;
            best_idx.copy_from_slice(&idx);
            first = false;
        }
        // odometer, last axis fastest
        let mut k = n;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < m {
                continue 'grid;
            }
            idx[k] = 0;
        }
        break;
    }

    let mut t: Vec<f64> = (0..n).map(|k| grids[k][best_idx[k]]).collect();
    let mut h: Vec<f64> = axes
        .iter()
        .map(|a| {
            let (lo, hi) = a.t_bounds();
            (hi - lo) / (m - 1) as f64
        })
        .collect();
    let mut value = best;
    let mut converged = false;
    let mut point: Vec<f64> = (0..n).map(|k| axes[k].x_at(t[k])).collect();

    for _ in 0..cfg.max_refine_iters {
        let before = value;
        for k in 0..n {
            let (lo, hi) = axes[k].t_bounds();
            let a = (t[k] - h[k]).max(lo);
            let b = (t[k] + h[k]).min(hi);
            if b <= a {
                continue;
            }
            let mut probe = point.clone();
            let gold = golden_min(
                |s| {
                    probe[k] = axes[k].x_at(s);
                    f(&probe)
                },
                a,
                b,
                t_tol(cfg, t[k]),
                62,
            );
            evals += gold.evals;
            let width = b - a;
            if gold.value < value {
                value = gold.value;
                t[k] = gold.t;
                point[k] = axes[k].x_at(gold.t);
            }
            let near_edge = (gold.t - a < 0.05 * width && a > lo) || (b - gold.t < 0.05 * width && b < hi);
            if near_edge {
                h[k] *= 2.0;
            } else {
                h[k] = (h[k] * 0.5).max(t_tol(cfg, t[k]) * 4.0);
            }
        }
        let scale = before.abs().max(f64::MIN_POSITIVE);
        if !(before - value > cfg.refine_tol * scale) {
            converged = true;
            break;
        }
    }

    OptResult {
        arg: point,
        value,
        converged,
        evals,
    }
}

/// Bisection on a continuous function with a sign change on `[lo, hi]`.
/// Stops when the bracket is narrower than `tol` or `h` vanishes exactly.
pub fn bisect_root(mut h: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut h_lo = h(lo);
    let h_hi = h(hi);
    if h_lo == 0.0 {
        return Ok(lo);
    }
    if h_hi == 0.0 {
        return Ok(hi);
    }
    if !(h_lo.signum() != h_hi.signum()) || h_lo.is_nan() || h_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, h_lo, h_hi });
    }
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let hm = h(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm.signum() == h_lo.signum() {
            lo = mid;
            h_lo = hm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn quadratic_peak() {
        let r = maximize_1d(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, &cfg());
        assert!((r.x() - 0.3).abs() < 1e-8, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn bimodal_returns_higher_peak() {
        // narrow tall peak at 0.8, broad low one at 0.2
        let f = |x: f64| 0.5 * (-(x - 0.2f64).powi(2) / 0.02).exp() + (-(x - 0.8f64).powi(2) / 0.001).exp();
        let r = maximize_1d(f, 0.0, 1.0, &cfg());
        assert!((r.x() - 0.8).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn log_axis_finds_small_argmax() {
        // peak at x = 1e-4 on [1e-6, 1]
        let f = |x: f64| -((x / 1e-4).ln()).powi(2);
        let r = maximize_1d(f, 1e-6, 1.0, &cfg());
        assert!((r.x() / 1e-4 - 1.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn grid_dominance_1d() {
        let f = |x: f64| (7.0 * x).sin() + 0.3 * (31.0 * x).cos();
        let c = OptimizerConfig {
            coarse_points: 64,
            ..cfg()
        };
        let r = maximize_1d(f, 0.0, 3.0, &c);
        for i in 0..64 {
            let x = 3.0 * i as f64 / 63.0;
            assert!(r.value >= f(x));
        }
    }

    #[test]
    fn separable_2d() {
        let r = minimize_nd(
            |v| (v[0] - 0.2).powi(2) + (v[1] - 0.7).powi(2),
            &[Axis::linear(0.0, 1.0), Axis::linear(0.0, 1.0)],
            &cfg(),
        );
        assert!((r.arg[0] - 0.2).abs() < 1e-6 && (r.arg[1] - 0.7).abs() < 1e-6, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn rotated_valley_3d() {
        let f = |v: &[f64]| {
            let (x, y, z) = (v[0], v[1], v[2]);
            (x + y - 1.0).powi(2) * 10.0 + (x - y).powi(2) + (z - 0.4).powi(2)
        };
        let axes = [Axis::linear(-2.0, 2.0), Axis::linear(-2.0, 2.0), Axis::linear(0.0, 1.0)];
        let r = minimize_nd(f, &axes, &cfg());
        assert!(r.value < 1e-10, "{r:?}");
        assert!((r.arg[0] - 0.5).abs() < 1e-4 && (r.arg[2] - 0.4).abs() < 1e-4);
    }

    #[test]
    fn nd_budget_and_determinism() {
        let c = cfg();
        let f = |v: &[f64]| (v[0] * 3.0).sin() * (v[1] * 2.0).cos() + v[2] * v[2];
        let axes = [Axis::linear(0.0, 3.0), Axis::linear(0.0, 3.0), Axis::linear(-1.0, 1.0)];
        let a = minimize_nd(f, &axes, &c);
        let b = minimize_nd(f, &axes, &c);
        assert_eq!(a, b);
        let m = c.nd_points;
        assert!(a.evals <= m.pow(3) + c.max_refine_iters * 3 * 64);
    }

    #[test]
    fn bisection() {
        let r = bisect_root(|x| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.5).abs() <= 1e-12);
        let e = bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12);
        assert!(matches!(e, Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let bad = OptimizerConfig {
            coarse_points: 4,
            ..cfg()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            refine_tol: 0.0,
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }
}
