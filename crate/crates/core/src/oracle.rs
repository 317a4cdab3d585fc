//! Exhaustive grid searches used to certify the optimizers and the
//! closed-form bounds.
//!
//! Every oracle evaluates its objective on a full tensor grid and keeps the
//! first best sample in index order. Alongside the best sample it reports a
//! `gap`: for each grid cell, the best corner value plus, per axis, the
//! largest change along that axis' cell edges, maximized (or minimized) over
//! cells and measured against the best sample. The true optimum over the
//! grid's box is expected within `gap` of the grid optimum for objectives that
//! are smooth at the grid scale.

use std::f64::consts::LN_2;

use crate::channel::NormalizedGains;
use crate::energy::{cut_slopes, ebn0_upper_full_objective, ebn0_upper_half_objective, BoundParams};
use crate::error::{check, Result};

/// Grid resolution and the ranges of the unbounded axes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Points per axis.
    pub points: usize,
    /// Log-spaced range for the peak ratio `A`.
    pub a_range: (f64, f64),
    /// Log-spaced range for the duty cycle α; the upper end is included.
    pub alpha_range: (f64, f64),
}

impl GridSpec {
    pub fn new(points: usize) -> Result<Self> {
        check(points >= 2, "points", points as f64, ">= 2")?;
        Ok(Self {
            points,
            a_range: (1e-4, 1e4),
            alpha_range: (1e-6, 1.0),
        })
    }

    /// 400 points per axis.
    pub fn default_3d() -> Self {
        Self::new(400).unwrap()
    }

    /// 2000 points.
    pub fn default_1d() -> Self {
        Self::new(2000).unwrap()
    }

    fn log_point(range: (f64, f64), n: usize, i: usize) -> f64 {
        let (lo, hi) = (range.0.ln(), range.1.ln());
        if i == 0 {
            range.0
        } else if i + 1 == n {
            range.1
        } else {
            (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Scan {
    best: f64,
    at: [usize; 3],
    bound: f64,
}

/// Maximizes `f(i, j, k)` over `dims`, processing one `i`-slab at a time.
/// Axes of length one contribute no edges.
fn scan3(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Scan {
    let [n0, n1, n2] = dims;
    let idx = |j: usize, k: usize| j * n2 + k;
    let mut prev: Vec<f64> = Vec::new();
    let mut cur = vec![0.0; n1 * n2];
    let mut best = Scan {
        best: f64::NEG_INFINITY,
        at: [0; 3],
        bound: f64::NEG_INFINITY,
    };
    let cells = |n: usize| if n > 1 { n - 1 } else { 1 };
    for i in 0..n0 {
        for j in 0..n1 {
            for k in 0..n2 {
                let v = f(i, j, k);
                cur[idx(j, k)] = v;
                if v > best.best {
                    best.best = v;
                    best.at = [i, j, k];
                }
            }
        }
        let pair = if n0 == 1 {
            Some((&cur, &cur))
        } else if i > 0 {
            Some((&prev, &cur))
        } else {
            None
        };
        if let Some((a, b)) = pair {
            for j in 0..cells(n1) {
                let j2 = (j + 1).min(n1 - 1);
                for k in 0..cells(n2) {
                    let k2 = (k + 1).min(n2 - 1);
                    let sq = [idx(j, k), idx(j2, k), idx(j, k2), idx(j2, k2)];
                    let mut cmax = f64::NEG_INFINITY;
                    let mut e0 = 0.0f64;
                    for &s in &sq {
                        cmax = cmax.max(a[s]).max(b[s]);
                        e0 = e0.max((a[s] - b[s]).abs());
                    }
                    let mut e1 = 0.0f64;
                    let mut e2 = 0.0f64;
                    for s in [a, b] {
                        e1 = e1.max((s[sq[0]] - s[sq[1]]).abs()).max((s[sq[2]] - s[sq[3]]).abs());
                        e2 = e2.max((s[sq[0]] - s[sq[2]]).abs()).max((s[sq[1]] - s[sq[3]]).abs());
                    }
                    best.bound = best.bound.max(cmax + e0 + e1 + e2);
                }
            }
        }
        std::mem::swap(&mut prev, &mut cur);
        if cur.len() != n1 * n2 {
            cur = vec![0.0; n1 * n2];
        }
    }
    best.bound = best.bound.max(best.best);
    best
}

/// Brute-force half-duplex cut-set maximin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLowerHalf {
    /// `ln 2 / c_prime`.
    pub value: f64,
    /// Best grid value of `min{C'1, C'2}`.
    pub c_prime: f64,
    pub lambda: f64,
    pub beta: f64,
    pub rho: f64,
    /// Cell-variation allowance on `c_prime`.
    pub gap: f64,
}

/// Maximin of the half-duplex cut slopes over `λ, β ∈ {1/n, …, 1}` and
/// `ρ ∈ {0, 1/(n-1), …, 1}`.
pub fn grid_lower_half(g: &NormalizedGains, spec: &GridSpec) -> GridLowerHalf {
    let n = spec.points;
    let u = |i: usize| (i + 1) as f64 / n as f64;
    let r = |k: usize| k as f64 / (n - 1) as f64;
    let s = scan3([n, n, n], |i, j, k| {
        let (c1, c2) = cut_slopes(g, u(j), r(k), u(i));
        c1.min(c2)
    });
    GridLowerHalf {
        value: LN_2 / s.best,
        c_prime: s.best,
        lambda: u(s.at[0]),
        beta: u(s.at[1]),
        rho: r(s.at[2]),
        gap: s.bound - s.best,
    }
}

/// Brute-force full-duplex cut-set maximin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLowerFull {
    pub value: f64,
    pub c_prime: f64,
    pub beta: f64,
    pub rho: f64,
    pub gap: f64,
}

/// Maximin of `½(γ31β + γ32(1-β))` and `½(1-ρ²)β(γ21 + γ31)` over
/// `β ∈ {1/n, …, 1}` and `ρ ∈ {0, …, 1}`.
pub fn grid_lower_full(g: &NormalizedGains, spec: &GridSpec) -> GridLowerFull {
    let n = spec.points;
    let u = |j: usize| (j + 1) as f64 / n as f64;
    let r = |k: usize| k as f64 / (n - 1) as f64;
    let s = scan3([1, n, n], |_, j, k| {
        let (b, rho) = (u(j), r(k));
        let c1 = 0.5 * (g.g31 * b + g.g32 * (1.0 - b));
        let c2 = 0.5 * (1.0 - rho * rho) * b * (g.g21 + g.g31);
        c1.min(c2)
    });
    GridLowerFull {
        value: LN_2 / s.best,
        c_prime: s.best,
        beta: u(s.at[1]),
        rho: r(s.at[2]),
        gap: s.bound - s.best,
    }
}

/// Which time-sharing objective [`grid_upper`] scans. Free variables run
/// over `λ ∈ {1/(n+1), …, n/(n+1)}`, `β ∈ {1/n, …, 1}` and log-spaced `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperObjective {
    /// Full duplex, free β.
    Full,
    /// Full duplex at a fixed β.
    FullFixed { beta: f64 },
    /// Half duplex, free λ and β.
    Half,
    /// Half duplex at a fixed λ, free β.
    HalfFixedLambda { lambda: f64 },
    /// Half duplex at fixed λ and β.
    HalfFixed { lambda: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridUpper {
    pub value: f64,
    pub params: BoundParams,
    /// Cell-variation allowance below `value`.
    pub gap: f64,
}

/// Grid minimum of a time-sharing energy objective.
///
/// # Panics
/// If a fixed β or λ lies outside the objective's domain.
pub fn grid_upper(objective: UpperObjective, g: &NormalizedGains, spec: &GridSpec) -> GridUpper {
    let n = spec.points;
    let b = |j: usize| (j + 1) as f64 / n as f64;
    let l = |i: usize| (i + 1) as f64 / (n + 1) as f64;
    let a = |k: usize| GridSpec::log_point(spec.a_range, n, k);
    let full = |beta: f64, a: f64| -ebn0_upper_full_objective(g, beta, a).unwrap();
    let half = |lambda: f64, beta: f64, a: f64| -ebn0_upper_half_objective(g, lambda, beta, a).unwrap();
    let (s, lambda, beta) = match objective {
        UpperObjective::Full => {
            let s = scan3([1, n, n], |_, j, k| full(b(j), a(k)));
            (s, None, b(s.at[1]))
        }
        UpperObjective::FullFixed { beta } => (scan3([1, 1, n], |_, _, k| full(beta, a(k))), None, beta),
        UpperObjective::Half => {
            let s = scan3([n, n, n], |i, j, k| half(l(i), b(j), a(k)));
            (s, Some(l(s.at[0])), b(s.at[1]))
        }
        UpperObjective::HalfFixedLambda { lambda } => {
            let s = scan3([1, n, n], |_, j, k| half(lambda, b(j), a(k)));
            (s, Some(lambda), b(s.at[1]))
        }
        UpperObjective::HalfFixed { lambda, beta } => {
            (scan3([1, 1, n], |_, _, k| half(lambda, beta, a(k))), Some(lambda), beta)
        }
    };
    GridUpper {
        value: -s.best,
        params: BoundParams {
            beta: Some(beta),
            lambda,
            a_ratio: Some(a(s.at[2])),
            rho: None,
        },
        gap: s.bound - s.best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAlpha {
    pub alpha: f64,
    pub rate: f64,
    pub gap: f64,
}

/// Grid maximum of a rate over log-spaced α, with `α = 1` included.
pub fn grid_alpha(mut rate: impl FnMut(f64) -> f64, spec: &GridSpec) -> GridAlpha {
    let n = spec.points;
    let x = |k: usize| GridSpec::log_point(spec.alpha_range, n, k);
    let s = scan3([1, 1, n], |_, _, k| rate(x(k)));
    GridAlpha {
        alpha: x(s.at[2]),
        rate: s.best,
        gap: s.bound - s.best,
    }
}
