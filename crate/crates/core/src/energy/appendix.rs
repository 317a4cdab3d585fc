//! Half-duplex cut-set lower bound on the energy per bit.
//!
//! With `R ≈ P·C'(β, ρ, λ) / ln 2` for small `P`, the cut-set slopes are
//!
//! ```text
//! C'1 = ½(γ31β + γ32(1-λ)(1-β) + 2(1-λ)ρ√(γ31γ32β(1-β)))
//! C'2 = ½(γ31β + γ21λβ - γ31(1-λ)βρ²)
//! ```
//!
//! and the bound is `ln 2 / max min{C'1, C'2}`. The maximization splits on
//! the listening fraction at `λ_th = γ31/(γ31 + γ21)`. Below the threshold
//! the optimum sits where the two slopes cross at an interior ρ, which gives
//! a closed form in λ. Above it, one of four regimes applies depending on
//! how a few β thresholds are ordered.

use std::f64::consts::LN_2;

use crate::channel::NormalizedGains;
use crate::error::{check, Error, Result};
use crate::opt::{maximize_on, Axis, OptimizerConfig};

use super::{BoundBranch, BoundParams, EnergyBoundResult};

/// Which sub-case of the large-λ regime is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LargeLambdaBullet {
    /// `β2 ≤ β2*` and `β2 ≤ β3*`: optimum at `(β2*, ρ = 1)`.
    B2Dominant,
    /// `β3* < β2 ≤ β2*`: better of `(β2*, 1)` and `(β3*, ρ*)`.
    B2StarVsB3Star,
    /// `β2* < β2 ≤ β3*`: optimum at `(β2, ρ = 1)`.
    B2Clamped,
    /// Otherwise: optimum at `(β3*, ρ*)`.
    B3Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLowerCase {
    /// `λ ≤ λ_th`, optimum at the interior stationary λ.
    SmallLambdaClosedForm,
    /// `λ ≤ λ_th`, stationary λ beyond the threshold, optimum at `λ_th`.
    SmallLambdaBoundary,
    LargeLambdaSearch(LargeLambdaBullet),
}

impl HalfLowerCase {
    pub fn tag(&self) -> &'static str {
        match self {
            HalfLowerCase::SmallLambdaClosedForm => "small-lambda-closed-form",
            HalfLowerCase::SmallLambdaBoundary => "small-lambda-boundary",
            HalfLowerCase::LargeLambdaSearch(LargeLambdaBullet::B2Dominant) => "large-lambda-b2",
            HalfLowerCase::LargeLambdaSearch(LargeLambdaBullet::B2StarVsB3Star) => "large-lambda-b2star-vs-b3star",
            HalfLowerCase::LargeLambdaSearch(LargeLambdaBullet::B2Clamped) => "large-lambda-b2-clamped",
            HalfLowerCase::LargeLambdaSearch(LargeLambdaBullet::B3Star) => "large-lambda-b3star",
        }
    }
}

/// β thresholds at one listening fraction.
///
/// `beta2` is `+∞` when its denominator vanishes. `rho_star` is the crossing
/// correlation at `beta3_star` as given by [`crossing_rho`], not clipped to
/// `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixThresholds {
    pub beta1: f64,
    pub beta2: f64,
    pub beta2_star: f64,
    pub beta3_star: f64,
    pub rho_star: f64,
    pub lambda_opt: f64,
}

#[inline]
fn c1p(g: &NormalizedGains, beta: f64, rho: f64, lambda: f64) -> f64 {
    let l = 1.0 - lambda;
    0.5 * (g.g31 * beta + g.g32 * l * (1.0 - beta) + 2.0 * l * rho * (g.g31 * g.g32 * beta * (1.0 - beta)).sqrt())
}

#[inline]
fn c2p(g: &NormalizedGains, beta: f64, rho: f64, lambda: f64) -> f64 {
    0.5 * (g.g31 * beta + g.g21 * lambda * beta - g.g31 * (1.0 - lambda) * beta * rho * rho)
}

pub(crate) fn cut_slopes(g: &NormalizedGains, beta: f64, rho: f64, lambda: f64) -> (f64, f64) {
    (c1p(g, beta, rho, lambda), c2p(g, beta, rho, lambda))
}

/// Small-power slopes `(C'1, C'2)` of the two half-duplex cuts, in nats per
/// unit power.
pub fn half_cut_derivatives(g: &NormalizedGains, beta: f64, rho: f64, lambda: f64) -> Result<(f64, f64)> {
    check((0.0..=1.0).contains(&beta), "beta", beta, "0 <= beta <= 1")?;
    check((0.0..=1.0).contains(&rho), "rho", rho, "0 <= rho <= 1")?;
    check((0.0..=1.0).contains(&lambda), "lambda", lambda, "0 <= lambda <= 1")?;
    Ok(cut_slopes(g, beta, rho, lambda))
}

/// The correlation `ρ*(β) = (√(γ21λβ/(1-λ)) - √(γ32(1-β))) / √(γ31β)` at which
/// `C'1` and `C'2` cross. The value is returned raw and may leave `[0, 1]`.
pub fn crossing_rho(g: &NormalizedGains, beta: f64, lambda: f64) -> f64 {
    ((g.g21 * lambda * beta / (1.0 - lambda)).sqrt() - (g.g32 * (1.0 - beta)).sqrt()) / (g.g31 * beta).sqrt()
}

fn beta_thresholds(g: &NormalizedGains, lambda: f64) -> (f64, f64, f64, f64) {
    let l = 1.0 - lambda;
    let a = g.g32 * l;
    let d1 = a + g.g21 * lambda;
    let beta1 = if d1 > 0.0 { a / d1 } else { 1.0 };
    let sq = ((g.g21 * lambda).sqrt() - (g.g31 * l).sqrt()).powi(2);
    let beta2 = if sq == 0.0 { f64::INFINITY } else { a / (a + sq) };
    let s2 = g.g31 - a;
    let r2 = (s2 * s2 + 4.0 * g.g31 * g.g32 * l * l).sqrt();
    let beta2_star = if r2 > 0.0 { 0.5 + 0.5 * s2 / r2 } else { 1.0 };
    let s3 = g.g31 + a;
    let r3 = (s3 * s3 + 4.0 * g.g21 * g.g32 * lambda * l).sqrt();
    let beta3_star = if r3 > 0.0 { 0.5 + 0.5 * s3 / r3 } else { 1.0 };
    (beta1, beta2, beta2_star, beta3_star)
}

/// All thresholds at listening fraction `lambda`.
pub fn appendix_thresholds(g: &NormalizedGains, lambda: f64) -> Result<AppendixThresholds> {
    check(lambda > 0.0 && lambda < 1.0, "lambda", lambda, "0 < lambda < 1")?;
    let (beta1, beta2, beta2_star, beta3_star) = beta_thresholds(g, lambda);
    Ok(AppendixThresholds {
        beta1,
        beta2,
        beta2_star,
        beta3_star,
        rho_star: crossing_rho(g, beta3_star, lambda),
        lambda_opt: lambda_opt(g),
    })
}

/// `D(λ) = γ31 - γ32(1-λ) + √((γ31 + γ32(1-λ))² + 4γ21γ32λ(1-λ))`, equal to
/// four times the common slope where the cuts cross at `β3*`.
pub fn crossing_branch_denominator(g: &NormalizedGains, lambda: f64) -> f64 {
    let a = g.g32 * (1.0 - lambda);
    let s = g.g31 + a;
    g.g31 - a + (s * s + 4.0 * g.g21 * g.g32 * lambda * (1.0 - lambda)).sqrt()
}

/// Energy per bit `4 ln 2 / D(λ)` of the crossing point at a given λ.
pub fn crossing_branch_energy(g: &NormalizedGains, lambda: f64) -> f64 {
    4.0 * LN_2 / crossing_branch_denominator(g, lambda)
}

fn near_singular(g: &NormalizedGains) -> bool {
    let k = g.g32 - 4.0 * g.g21;
    k.abs() <= 1e-9 * g.g32.max(4.0 * g.g21).max(1.0)
}

fn lambda_opt_numeric(g: &NormalizedGains) -> f64 {
    let cfg = OptimizerConfig {
        coarse_points: 2001,
        refine_tol: 1e-12,
        ..Default::default()
    };
    maximize_on(|l| crossing_branch_denominator(g, l), Axis::linear(0.0, 1.0), &cfg).x()
}

/// Stationary point of `D(λ)`:
/// `(γ31 + γ32 - 2γ21 - √(γ31² + γ31γ32 + γ21γ32)) / (γ32 - 4γ21)`.
///
/// When `γ32 ≈ 4γ21` the quotient is `0/0` and `D` is maximized numerically
/// over `[0, 1]` instead.
pub fn lambda_opt(g: &NormalizedGains) -> f64 {
    if near_singular(g) {
        return lambda_opt_numeric(g);
    }
    let root = (g.g31 * g.g31 + g.g31 * g.g32 + g.g21 * g.g32).sqrt();
    (g.g31 + g.g32 - 2.0 * g.g21 - root) / (g.g32 - 4.0 * g.g21)
}

/// Closed-form energy per bit at `λopt`:
/// `2(γ32 - 4γ21) ln 2 / (γ31γ32 - 2γ21γ31 + γ21γ32 - 2γ21√(γ31² + γ31γ32 + γ21γ32))`.
///
/// Returns [`Error::Singular`] when `γ32 ≈ 4γ21`, where numerator and
/// denominator both vanish.
pub fn ebn0_lower_half_closed(g: &NormalizedGains) -> Result<f64> {
    if near_singular(g) {
        return Err(Error::Singular("gamma32 equals 4 * gamma21"));
    }
    let root = (g.g31 * g.g31 + g.g31 * g.g32 + g.g21 * g.g32).sqrt();
    let den = g.g31 * g.g32 - 2.0 * g.g21 * g.g31 + g.g21 * g.g32 - 2.0 * g.g21 * root;
    Ok(2.0 * (g.g32 - 4.0 * g.g21) * LN_2 / den)
}

/// Best slope at one λ above the threshold, with the achieving β, ρ and
/// regime.
fn large_lambda_slope(g: &NormalizedGains, lambda: f64) -> (f64, f64, f64, LargeLambdaBullet) {
    let (_, b2, b2s, b3) = beta_thresholds(g, lambda);
    let at_b3 = || {
        let r = crossing_rho(g, b3, lambda);
        (c1p(g, b3, r, lambda), b3, r)
    };
    if b2 <= b2s && b2 <= b3 {
        (c1p(g, b2s, 1.0, lambda), b2s, 1.0, LargeLambdaBullet::B2Dominant)
    } else if b3 < b2 && b2 <= b2s {
        let s = c1p(g, b2s, 1.0, lambda);
        let (t, b, r) = at_b3();
        if s >= t {
            (s, b2s, 1.0, LargeLambdaBullet::B2StarVsB3Star)
        } else {
            (t, b, r, LargeLambdaBullet::B2StarVsB3Star)
        }
    } else if b2s < b2 && b2 <= b3 {
        (c1p(g, b2, 1.0, lambda), b2, 1.0, LargeLambdaBullet::B2Clamped)
    } else {
        let (t, b, r) = at_b3();
        (t, b, r, LargeLambdaBullet::B3Star)
    }
}

struct Candidate {
    slope: f64,
    lambda: f64,
    beta: f64,
    rho: f64,
    case: HalfLowerCase,
    converged: bool,
}

fn small_lambda_candidate(g: &NormalizedGains, lambda_th: f64) -> Candidate {
    let lo = lambda_opt(g);
    if lo > 0.0 && lo <= lambda_th {
        let (_, _, _, b3) = beta_thresholds(g, lo);
        let slope = match ebn0_lower_half_closed(g) {
            Ok(e) => LN_2 / e,
            Err(_) => 0.25 * crossing_branch_denominator(g, lo),
        };
        Candidate {
            slope,
            lambda: lo,
            beta: b3,
            rho: crossing_rho(g, b3, lo),
            case: HalfLowerCase::SmallLambdaClosedForm,
            converged: true,
        }
    } else {
        let (_, _, _, b3) = beta_thresholds(g, lambda_th);
        let rho = crossing_rho(g, b3, lambda_th);
        Candidate {
            slope: c1p(g, b3, rho, lambda_th),
            lambda: lambda_th,
            beta: b3,
            rho,
            case: HalfLowerCase::SmallLambdaBoundary,
            converged: true,
        }
    }
}

fn large_lambda_candidate(g: &NormalizedGains, lambda_th: f64, cfg: &OptimizerConfig) -> Candidate {
    let search = OptimizerConfig {
        coarse_points: 2000,
        ..cfg.clone()
    };
    let axis = Axis::linear(lambda_th + (1.0 - lambda_th) / 2000.0, 1.0);
    let r = maximize_on(|l| large_lambda_slope(g, l).0, axis, &search);
    let lambda = r.x();
    let (slope, beta, rho, bullet) = large_lambda_slope(g, lambda);
    Candidate {
        slope,
        lambda,
        beta,
        rho,
        case: HalfLowerCase::LargeLambdaSearch(bullet),
        converged: r.converged,
    }
}

/// Half-duplex cut-set lower bound on the energy per bit.
///
/// Requires `γ31 > 0`; without a direct link the slopes above degenerate.
/// The larger slope of the small-λ and large-λ regimes wins, ties going to the
/// small-λ one.
pub fn ebn0_lower_half(g: &NormalizedGains, cfg: &OptimizerConfig) -> Result<EnergyBoundResult> {
    check(g.g31 > 0.0, "g31", g.g31, "> 0")?;
    cfg.validate()?;
    let lambda_th = g.lambda_threshold();
    let mut best = small_lambda_candidate(g, lambda_th);
    if lambda_th < 1.0 {
        let large = large_lambda_candidate(g, lambda_th, cfg);
        if large.slope > best.slope {
            best = large;
        }
    }
    Ok(EnergyBoundResult::new(
        LN_2 / best.slope,
        BoundParams {
            beta: Some(best.beta),
            rho: Some(best.rho),
            lambda: Some(best.lambda),
            a_ratio: None,
        },
        BoundBranch::HalfLower(best.case),
        best.converged,
    ))
}
