//! Bounds on the minimum energy per bit `lim P/C(P)` as `P → 0`.
//!
//! Energy per bit is reported as the linear `Eb/N0` with the power `P`
//! counting both transmitters. Time-sharing upper bounds come from holding the
//! peak ratio `A = P/α` fixed while `P` and `α` vanish together; lower bounds
//! come from the first-order behaviour of the cut-set bounds, written as
//! `ln 2 / C'` with `C'` the natural-log derivative.

use std::f64::consts::LN_2;

use crate::channel::{check_lambda, gamma, NormalizedGains};
use crate::error::{check, Result};
use crate::opt::{minimize_nd, minimize_on, Axis, OptimizerConfig};

mod appendix;

pub(crate) use appendix::cut_slopes;

pub use appendix::{
    appendix_thresholds, crossing_branch_denominator, crossing_branch_energy, crossing_rho, ebn0_lower_half,
    ebn0_lower_half_closed, half_cut_derivatives, lambda_opt, AppendixThresholds, HalfLowerCase,
    LargeLambdaBullet,
};

/// Smallest source share searched by the numerical upper bounds.
pub const BETA_MIN: f64 = 1e-3;
/// Listening fractions searched by the half-duplex upper bound.
pub const LAMBDA_RANGE: (f64, f64) = (1e-3, 1.0 - 1e-3);

/// Which analytic case or search produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundBranch {
    /// Interior point of a numerical search over `A > 0`.
    Search,
    /// The `A → 0` endpoint: all power at the source, point-to-point energy.
    PointToPoint,
    /// Full-duplex cut-set maximin at the crossing source share.
    Crossing,
    /// Full-duplex cut-set maximin at `β = 1`.
    SourceOnly,
    HalfLower(HalfLowerCase),
}

impl BoundBranch {
    pub fn tag(&self) -> String {
        match self {
            BoundBranch::Search => "search".into(),
            BoundBranch::PointToPoint => "point-to-point".into(),
            BoundBranch::Crossing => "crossing".into(),
            BoundBranch::SourceOnly => "source-only".into(),
            BoundBranch::HalfLower(c) => c.tag().into(),
        }
    }
}

/// Parameters achieving a bound. Only the ones relevant to the bound are set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundParams {
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub lambda: Option<f64>,
    pub a_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBoundResult {
    /// Linear `Eb/N0`.
    pub value: f64,
    /// `10 log10(value)`.
    pub value_db: f64,
    pub params: BoundParams,
    pub branch: BoundBranch,
    /// False when a search behind the value exhausted its budget.
    pub converged: bool,
}

impl EnergyBoundResult {
    pub(crate) fn new(value: f64, params: BoundParams, branch: BoundBranch, converged: bool) -> Self {
        Self {
            value,
            value_db: 10.0 * value.log10(),
            params,
            branch,
            converged,
        }
    }
}

/// Energy per bit of plain compress-and-forward (α = 1) at source share β.
/// The relay contributes only at second order in `P`, which leaves the
/// point-to-point value `2 ln 2 / (γ31 β)` in both duplex modes.
pub fn traditional_cf_energy(g: &NormalizedGains, beta: f64) -> f64 {
    let c = g.g31 * beta;
    if c > 0.0 {
        2.0 * LN_2 / c
    } else {
        f64::INFINITY
    }
}

#[inline]
fn upper_full_kernel(g: &NormalizedGains, beta: f64, a: f64) -> f64 {
    if a == 0.0 {
        return traditional_cf_energy(g, beta);
    }
    let gg = (g.g21 + g.g31) * beta + g.g32 * (1.0 - beta);
    let x = g.g31 * beta * a + g.g32 * g.g21 * beta * (1.0 - beta) * a * a / (1.0 + gg * a);
    if x > 0.0 {
        a / gamma(x)
    } else {
        f64::INFINITY
    }
}

/// Full-duplex time-sharing objective
/// `A / Γ(γ31βA + γ32γ21β(1-β)A² / (1 + GA))` with
/// `G = γ21β + γ31β + γ32(1-β)`. At `A = 0` returns the limit `2 ln 2 / (γ31β)`.
pub fn ebn0_upper_full_objective(g: &NormalizedGains, beta: f64, a: f64) -> Result<f64> {
    check(beta > 0.0 && beta <= 1.0, "beta", beta, "0 < beta <= 1")?;
    check(a >= 0.0 && a.is_finite(), "a", a, "finite, >= 0")?;
    Ok(upper_full_kernel(g, beta, a))
}

fn a_axis(cfg: &OptimizerConfig) -> Axis {
    Axis::log(1.0 / cfg.a_max, cfg.a_max)
}

/// Picks the `A = 0` endpoint when it beats the search.
fn with_endpoint(search: EnergyBoundResult, endpoint: f64, endpoint_params: BoundParams) -> EnergyBoundResult {
    if endpoint <= search.value {
        EnergyBoundResult::new(endpoint, endpoint_params, BoundBranch::PointToPoint, search.converged)
    } else {
        search
    }
}

/// Full-duplex time-sharing upper bound: minimum of
/// [`ebn0_upper_full_objective`] over `β ∈ (0, 1]` and `A ≥ 0`.
pub fn ebn0_upper_full(g: &NormalizedGains, cfg: &OptimizerConfig) -> EnergyBoundResult {
    let r = minimize_nd(
        |v| upper_full_kernel(g, v[0], v[1]),
        &[Axis::linear(BETA_MIN, 1.0), a_axis(cfg)],
        cfg,
    );
    let search = EnergyBoundResult::new(
        r.value,
        BoundParams {
            beta: Some(r.arg[0]),
            a_ratio: Some(r.arg[1]),
            ..Default::default()
        },
        BoundBranch::Search,
        r.converged,
    );
    with_endpoint(
        search,
        traditional_cf_energy(g, 1.0),
        BoundParams {
            beta: Some(1.0),
            a_ratio: Some(0.0),
            ..Default::default()
        },
    )
}

/// Full-duplex upper bound with the source share held at `beta`; the
/// minimum is over `A` only.
pub fn ebn0_upper_full_fixed_split(g: &NormalizedGains, beta: f64, cfg: &OptimizerConfig) -> Result<EnergyBoundResult> {
    check(beta > 0.0 && beta <= 1.0, "beta", beta, "0 < beta <= 1")?;
    let r = minimize_on(|a| upper_full_kernel(g, beta, a), a_axis(cfg), cfg);
    let search = EnergyBoundResult::new(
        r.value,
        BoundParams {
            beta: Some(beta),
            a_ratio: Some(r.x()),
            ..Default::default()
        },
        BoundBranch::Search,
        r.converged,
    );
    Ok(with_endpoint(
        search,
        traditional_cf_energy(g, beta),
        BoundParams {
            beta: Some(beta),
            a_ratio: Some(0.0),
            ..Default::default()
        },
    ))
}

/// Full-duplex cut-set lower bound `ln 2 / max_β min{C'1, C'2}` with
/// `C'1 = ½(γ31β + γ32(1-β))` and `C'2 = ½β(γ21 + γ31)`, the small-power
/// slopes of the two cuts at `ρ = 0` (the cuts' maximin correlation).
///
/// `C'2` increases in β and crosses `C'1` at `β = γ32/(γ32 + γ21)`; the
/// maximin sits there, or at `β = 1` when `C'1` is itself increasing.
pub fn ebn0_lower_full(g: &NormalizedGains) -> EnergyBoundResult {
    let c1 = |b: f64| 0.5 * (g.g31 * b + g.g32 * (1.0 - b));
    let c2 = |b: f64| 0.5 * b * (g.g21 + g.g31);
    let at_one = c1(1.0).min(c2(1.0));
    let den = g.g32 + g.g21;
    let crossing = if den > 0.0 { g.g32 / den } else { 0.0 };
    let (beta, slope, branch) = if crossing > 0.0 && crossing < 1.0 && c2(crossing) > at_one {
        (crossing, c2(crossing), BoundBranch::Crossing)
    } else {
        (1.0, at_one, BoundBranch::SourceOnly)
    };
    let value = if slope > 0.0 { LN_2 / slope } else { f64::INFINITY };
    EnergyBoundResult::new(
        value,
        BoundParams {
            beta: Some(beta),
            rho: Some(0.0),
            ..Default::default()
        },
        branch,
        true,
    )
}

#[inline]
fn upper_half_kernel(g: &NormalizedGains, lambda: f64, beta: f64, a: f64) -> f64 {
    if a == 0.0 {
        return traditional_cf_energy(g, beta);
    }
    let x = g.g31 * beta * a;
    let y = g.g32 * (1.0 - beta) * a / (1.0 + x);
    let expo = (1.0 - lambda) / lambda * y.ln_1p();
    let relay = if expo > 700.0 {
        g.g21 * beta * a
    } else {
        let bracket = expo.exp_m1();
        if bracket > 0.0 {
            let q = (1.0 + g.g21 * beta * a + x) / ((1.0 + x) * bracket);
            g.g21 * beta * a / (1.0 + q)
        } else {
            0.0
        }
    };
    let den = lambda * gamma(x + relay) + (1.0 - lambda) * gamma(x);
    if den > 0.0 {
        a / den
    } else {
        f64::INFINITY
    }
}

/// Half-duplex time-sharing objective: `A` over
/// `λΓ(γ31βA + γ21βA/(1 + Q)) + (1-λ)Γ(γ31βA)` where `Q` is the active-phase
/// quantization noise ratio expressed in `A`. At `A = 0` returns the limit
/// `2 ln 2 / (γ31β)`.
pub fn ebn0_upper_half_objective(g: &NormalizedGains, lambda: f64, beta: f64, a: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check(beta > 0.0 && beta <= 1.0, "beta", beta, "0 < beta <= 1")?;
    check(a >= 0.0 && a.is_finite(), "a", a, "finite, >= 0")?;
    Ok(upper_half_kernel(g, lambda, beta, a))
}

/// Half-duplex time-sharing upper bound: minimum of
/// [`ebn0_upper_half_objective`] over λ, β and `A`.
pub fn ebn0_upper_half(g: &NormalizedGains, cfg: &OptimizerConfig) -> EnergyBoundResult {
    let r = minimize_nd(
        |v| upper_half_kernel(g, v[0], v[1], v[2]),
        &[
            Axis::linear(LAMBDA_RANGE.0, LAMBDA_RANGE.1),
            Axis::linear(BETA_MIN, 1.0),
            a_axis(cfg),
        ],
        cfg,
    );
    let search = EnergyBoundResult::new(
        r.value,
        BoundParams {
            lambda: Some(r.arg[0]),
            beta: Some(r.arg[1]),
            a_ratio: Some(r.arg[2]),
            ..Default::default()
        },
        BoundBranch::Search,
        r.converged,
    );
    with_endpoint(
        search,
        traditional_cf_energy(g, 1.0),
        BoundParams {
            beta: Some(1.0),
            a_ratio: Some(0.0),
            ..Default::default()
        },
    )
}

/// Half-duplex upper bound at a fixed listening fraction, minimized over β
/// and `A`.
pub fn ebn0_upper_half_fixed_lambda(g: &NormalizedGains, lambda: f64, cfg: &OptimizerConfig) -> Result<EnergyBoundResult> {
    check_lambda(lambda)?;
    let r = minimize_nd(
        |v| upper_half_kernel(g, lambda, v[0], v[1]),
        &[Axis::linear(BETA_MIN, 1.0), a_axis(cfg)],
        cfg,
    );
    let search = EnergyBoundResult::new(
        r.value,
        BoundParams {
            lambda: Some(lambda),
            beta: Some(r.arg[0]),
            a_ratio: Some(r.arg[1]),
            ..Default::default()
        },
        BoundBranch::Search,
        r.converged,
    );
    Ok(with_endpoint(
        search,
        traditional_cf_energy(g, 1.0),
        BoundParams {
            lambda: Some(lambda),
            beta: Some(1.0),
            a_ratio: Some(0.0),
            ..Default::default()
        },
    ))
}

/// Half-duplex upper bound with λ and β held fixed; the minimum is over `A`.
pub fn ebn0_upper_half_fixed_split(
    g: &NormalizedGains,
    lambda: f64,
    beta: f64,
    cfg: &OptimizerConfig,
) -> Result<EnergyBoundResult> {
    check_lambda(lambda)?;
    check(beta > 0.0 && beta <= 1.0, "beta", beta, "0 < beta <= 1")?;
    let r = minimize_on(|a| upper_half_kernel(g, lambda, beta, a), a_axis(cfg), cfg);
    let params = BoundParams {
        lambda: Some(lambda),
        beta: Some(beta),
        a_ratio: Some(r.x()),
        ..Default::default()
    };
    let search = EnergyBoundResult::new(r.value, params, BoundBranch::Search, r.converged);
    Ok(with_endpoint(
        search,
        traditional_cf_energy(g, beta),
        BoundParams {
            a_ratio: Some(0.0),
            ..params
        },
    ))
}

/// Small-power limit of the relative rate gain `(R_ts - R_cf)/R_cf` at a
/// fixed full-duplex split: traditional over time-sharing energy per bit,
/// minus one.
pub fn asymptotic_improvement_full(g: &NormalizedGains, beta: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let ts = ebn0_upper_full_fixed_split(g, beta, cfg)?;
    Ok(traditional_cf_energy(g, beta) / ts.value - 1.0)
}

/// Half-duplex counterpart of [`asymptotic_improvement_full`].
pub fn asymptotic_improvement_half(g: &NormalizedGains, lambda: f64, beta: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let ts = ebn0_upper_half_fixed_split(g, lambda, beta, cfg)?;
    Ok(traditional_cf_energy(g, beta) / ts.value - 1.0)
}
