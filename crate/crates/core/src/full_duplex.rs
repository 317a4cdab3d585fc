//! Full-duplex compress-and-forward rates and the max-flow min-cut bound.

use crate::channel::{gamma, FullDuplexPowers, NormalizedGains};
use crate::error::{check, Result};
use crate::opt::{maximize_on, Axis, OptimizerConfig};

/// A rate together with the quantities that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRateBreakdown {
    pub rate: f64,
    pub alpha_opt: Option<f64>,
    pub cut1: Option<f64>,
    pub cut2: Option<f64>,
    pub rho_opt: Option<f64>,
    /// False when the α search hit its refinement budget.
    pub converged: bool,
}

/// Compress-and-forward rate
/// `Γ(γ31P1 + γ32γ21P1P2 / (1 + γ21P1 + γ31P1 + γ32P2))`.
pub fn cf_rate_full(g: &NormalizedGains, p: &FullDuplexPowers) -> f64 {
    ts_kernel(g, p, 1.0)
}

#[inline]
fn ts_kernel(g: &NormalizedGains, p: &FullDuplexPowers, alpha: f64) -> f64 {
    let s = (g.g21 + g.g31) * p.p1 + g.g32 * p.p2;
    let relay = if p.p1 == 0.0 || p.p2 == 0.0 {
        0.0
    } else {
        g.g32 * g.g21 * p.p1 * p.p2 / (alpha + s)
    };
    // α Γ((γ31P1 + relay) / α); relay already carries one factor of 1/α
    alpha * gamma((g.g31 * p.p1 + relay) / alpha)
}

/// Time-sharing objective at a fixed duty cycle: silent for `1 - α`, then
/// compress-and-forward at powers `P1/α`, `P2/α`.
pub fn ts_cf_rate_full(g: &NormalizedGains, p: &FullDuplexPowers, alpha: f64) -> Result<f64> {
    check(alpha > 0.0 && alpha <= 1.0, "alpha", alpha, "0 < alpha <= 1")?;
    Ok(ts_kernel(g, p, alpha))
}

/// Maximizes the time-sharing rate over `α ∈ [alpha_min, 1]`.
///
/// The objective is not concave in general, so a log-spaced grid over the
/// whole interval precedes the local refinement. `α = 1` is on the grid, so
/// the result never falls below [`cf_rate_full`].
pub fn optimize_ts_cf_full(g: &NormalizedGains, p: &FullDuplexPowers, cfg: &OptimizerConfig) -> FullRateBreakdown {
    let r = maximize_on(|a| ts_kernel(g, p, a), Axis::log(cfg.alpha_min, 1.0), cfg);
    FullRateBreakdown {
        rate: r.value,
        alpha_opt: Some(r.x()),
        cut1: None,
        cut2: None,
        rho_opt: None,
        converged: r.converged,
    }
}

/// Max-flow min-cut bound with cuts `Γ(γ31P1 + γ32P2)` and
/// `Γ(P1(1 - ρ²)(γ21 + γ31))`.
///
/// The first cut carries no correlation term, so it is flat in ρ while the
/// second decreases: the max-min always sits at `ρ = 0`.
pub fn cutset_full(g: &NormalizedGains, p: &FullDuplexPowers) -> FullRateBreakdown {
    let cut1 = gamma(g.g31 * p.p1 + g.g32 * p.p2);
    let cut2 = gamma(p.p1 * (g.g21 + g.g31));
    FullRateBreakdown {
        rate: cut1.min(cut2),
        alpha_opt: None,
        cut1: Some(cut1),
        cut2: Some(cut2),
        rho_opt: Some(0.0),
        converged: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gains(a: f64, b: f64, c: f64) -> NormalizedGains {
        NormalizedGains::new(a, b, c).unwrap()
    }

    fn pw(p1: f64, p2: f64) -> FullDuplexPowers {
        FullDuplexPowers::new(p1, p2).unwrap()
    }

    #[test]
    fn cf_rate_examples() {
        let g = gains(1.0, 1.0, 1.0);
        let r = cf_rate_full(&g, &pw(1.0, 1.0));
        assert!((r - 0.5 * 2.25f64.log2()).abs() < 1e-15);
        assert!((r - 0.58496).abs() < 1e-5);
        assert_eq!(cf_rate_full(&gains(3.0, 2.0, 5.0), &pw(0.0, 4.0)), 0.0);
        let r = cf_rate_full(&gains(3.0, 2.0, 0.0), &pw(0.7, 4.0));
        assert_eq!(r, gamma(2.0 * 0.7));
    }

    #[test]
    fn ts_rate_examples() {
        let g = gains(2.0, 0.5, 3.0);
        let p = pw(0.3, 0.8);
        assert_eq!(ts_cf_rate_full(&g, &p, 1.0).unwrap(), cf_rate_full(&g, &p));
        assert_eq!(ts_cf_rate_full(&g, &pw(0.0, 0.0), 0.3).unwrap(), 0.0);
        assert!(ts_cf_rate_full(&g, &p, 0.0).is_err());
        assert!(ts_cf_rate_full(&g, &p, 1.01).is_err());

        // d = 0.5 geometry at low power
        let g = gains(4.0, 1.0, 4.0);
        let p = pw(0.005, 0.005);
        let ts = ts_cf_rate_full(&g, &p, 0.01).unwrap();
        let direct = 0.01
            * 0.5
            * (1.0f64 + 0.005 / 0.01 + 16.0 * 0.005 * 0.005 / (0.01 * 0.01 + 0.01 * (4.0 * 0.005 + 0.005 + 4.0 * 0.005)))
                .log2();
        assert!((ts - direct).abs() < 1e-15);
        assert!(ts > cf_rate_full(&g, &p));
    }

    fn alpha_grid_oracle(g: &NormalizedGains, p: &FullDuplexPowers) -> (f64, f64) {
        // 20001 log-spaced points on [1e-6, 1]
        (0..=20000)
            .map(|i| {
                let a = 10f64.powf(-6.0 + 6.0 * i as f64 / 20000.0);
                (a, ts_kernel(g, p, a))
            })
            .fold((1.0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
    }

    #[test]
    fn high_snr_prefers_full_duty_cycle() {
        let g = gains(1.0, 1.0, 1.0);
        let p = pw(100.0, 100.0);
        let r = optimize_ts_cf_full(&g, &p, &OptimizerConfig::default());
        let (a_star, _) = alpha_grid_oracle(&g, &p);
        assert_eq!(a_star, 1.0);
        assert!((r.alpha_opt.unwrap() - 1.0).abs() < 1e-6);
        assert!((r.rate - cf_rate_full(&g, &p)).abs() < 1e-12);
    }

    #[test]
    fn low_snr_oracle_agreement() {
        let g = gains(4.0, 1.0, 4.0);
        let p = pw(0.005, 0.005);
        let r = optimize_ts_cf_full(&g, &p, &OptimizerConfig::default());
        let (a_star, best) = alpha_grid_oracle(&g, &p);
        assert!(a_star < 1.0);
        assert!(r.rate >= best - 1e-15, "{} < {best}", r.rate);
        assert!((r.rate - best) / best < 1e-6);
        assert!(r.rate > cf_rate_full(&g, &p));
    }

    #[test]
    fn zero_source_power() {
        let r = optimize_ts_cf_full(&gains(4.0, 1.0, 4.0), &pw(0.0, 1.0), &OptimizerConfig::default());
        assert_eq!(r.rate, 0.0);
    }

    #[test]
    fn cutset_examples() {
        let c = cutset_full(&gains(1.0, 1.0, 1.0), &pw(1.0, 1.0));
        assert!((c.rate - 0.5 * 3f64.log2()).abs() < 1e-15);
        assert!((c.rate - 0.79248).abs() < 1e-5);
        assert_eq!(c.rho_opt, Some(0.0));
        assert_eq!(cutset_full(&gains(1.0, 1.0, 1.0), &pw(0.0, 1.0)).rate, 0.0);
        let c = cutset_full(&gains(2.0, 1.0, 1e12), &pw(0.4, 1.0));
        assert_eq!(c.rate, gamma(0.4 * 3.0));
    }

    #[test]
    fn cf_rate_is_monotone() {
        let base = [1.5, 0.7, 2.5, 0.4, 0.9];
        let eval = |v: &[f64; 5]| cf_rate_full(&gains(v[0], v[1], v[2]), &pw(v[3], v[4]));
        for k in 0..5 {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..40 {
                let mut v = base;
                v[k] = 0.05 * i as f64;
                let r = eval(&v);
                assert!(r >= prev - 1e-15, "not monotone in coordinate {k}");
                prev = r;
            }
        }
    }

    proptest! {
        #[test]
        fn rates_respect_cutset(
            g21 in 0.0..50.0f64, g31 in 0.0..50.0f64, g32 in 0.0..50.0f64,
            p1 in 0.0..5.0f64, p2 in 0.0..5.0f64,
        ) {
            let g = gains(g21, g31, g32);
            let p = pw(p1, p2);
            let cut = cutset_full(&g, &p).rate;
            let cf = cf_rate_full(&g, &p);
            prop_assert!(cf <= cut + 1e-12);
            let cfg = OptimizerConfig { coarse_points: 64, ..Default::default() };
            let ts = optimize_ts_cf_full(&g, &p, &cfg).rate;
            prop_assert!(ts >= cf - 1e-12);
            prop_assert!(ts <= cut + 1e-12);
        }
    }
}
