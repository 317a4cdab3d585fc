//! Half-duplex (time-division) compress-and-forward with Wyner-Ziv
//! quantization at the relay, its time-sharing variant and the half-duplex
//! cut-set bound.

use crate::channel::{check_lambda, gamma, HalfDuplexPowers, NormalizedGains};
use crate::error::{check, Result};
use crate::opt::{bisect_root, maximize_on, Axis, OptimizerConfig};

/// Relay quantization noise relative to the relay receiver noise, `N_w / N1`.
/// Infinite when the relay cannot forward anything.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QuantizationNoise(pub f64);

impl QuantizationNoise {
    pub fn ratio(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfRateBreakdown {
    pub rate: f64,
    /// Contribution of the listening phase.
    pub phase1: f64,
    /// Contribution of the relay transmit phase.
    pub phase2: f64,
    pub alpha_opt: Option<f64>,
    pub rho_opt: Option<f64>,
    pub cut1: Option<f64>,
    pub cut2: Option<f64>,
    pub converged: bool,
}

// Beyond this exponent (1 + y)^((1-λ)/λ) is treated as infinite.
const EXP_OVERFLOW: f64 = 700.0;

fn quant_kernel(g: &NormalizedGains, p: &HalfDuplexPowers, alpha: f64) -> f64 {
    let x1 = g.g31 * p.p1_first;
    let num = alpha + g.g21 * p.p1_first + x1;
    let y = g.g32 * p.p2 / (alpha + g.g31 * p.p1_second);
    let expo = (1.0 - p.lambda) / p.lambda * y.ln_1p();
    if expo > EXP_OVERFLOW {
        return 0.0;
    }
    let bracket = expo.exp_m1();
    if bracket <= 0.0 {
        return f64::INFINITY;
    }
    num / ((alpha + x1) * bracket)
}

fn rate_kernel(g: &NormalizedGains, p: &HalfDuplexPowers, alpha: f64) -> (f64, f64) {
    let ratio = quant_kernel(g, p, alpha);
    let relay = if ratio.is_infinite() {
        0.0
    } else {
        g.g21 * p.p1_first / (alpha * (1.0 + ratio))
    };
    let phase1 = alpha * p.lambda * gamma(g.g31 * p.p1_first / alpha + relay);
    let phase2 = alpha * (1.0 - p.lambda) * gamma(g.g31 * p.p1_second / alpha);
    (phase1, phase2)
}

fn breakdown(phases: (f64, f64)) -> HalfRateBreakdown {
    HalfRateBreakdown {
        rate: phases.0 + phases.1,
        phase1: phases.0,
        phase2: phases.1,
        alpha_opt: None,
        rho_opt: None,
        cut1: None,
        cut2: None,
        converged: true,
    }
}

/// `N_w/N1 = (1 + γ21P1⁽¹⁾ + γ31P1⁽¹⁾) / ((1 + γ31P1⁽¹⁾)((1 + γ32P2/(1 + γ31P1⁽²⁾))^((1-λ)/λ) - 1))`.
pub fn quant_noise_half(g: &NormalizedGains, p: &HalfDuplexPowers) -> Result<QuantizationNoise> {
    check_lambda(p.lambda)?;
    Ok(QuantizationNoise(quant_kernel(g, p, 1.0)))
}

/// Quantization noise in the active phase of the time-sharing scheme. Equal
/// to [`quant_noise_half`] at `alpha = 1`.
pub fn ts_quant_noise_half(g: &NormalizedGains, p: &HalfDuplexPowers, alpha: f64) -> Result<QuantizationNoise> {
    check_lambda(p.lambda)?;
    check(alpha > 0.0 && alpha <= 1.0, "alpha", alpha, "0 < alpha <= 1")?;
    Ok(QuantizationNoise(quant_kernel(g, p, alpha)))
}

/// `λΓ(γ31P1⁽¹⁾ + γ21P1⁽¹⁾/(1 + N_w/N1)) + (1-λ)Γ(γ31P1⁽²⁾)`.
pub fn cf_rate_half(g: &NormalizedGains, p: &HalfDuplexPowers) -> Result<HalfRateBreakdown> {
    check_lambda(p.lambda)?;
    Ok(breakdown(rate_kernel(g, p, 1.0)))
}

/// Time-sharing objective at a fixed duty cycle `alpha`.
pub fn ts_cf_rate_half(g: &NormalizedGains, p: &HalfDuplexPowers, alpha: f64) -> Result<HalfRateBreakdown> {
    check_lambda(p.lambda)?;
    check(alpha > 0.0 && alpha <= 1.0, "alpha", alpha, "0 < alpha <= 1")?;
    let mut b = breakdown(rate_kernel(g, p, alpha));
    b.alpha_opt = Some(alpha);
    Ok(b)
}

/// Maximizes the time-sharing rate over `α ∈ [alpha_min, 1]` for the given λ.
pub fn optimize_ts_cf_half(
    g: &NormalizedGains,
    p: &HalfDuplexPowers,
    cfg: &OptimizerConfig,
) -> Result<HalfRateBreakdown> {
    check_lambda(p.lambda)?;
    let r = maximize_on(
        |a| {
            let (x, y) = rate_kernel(g, p, a);
            x + y
        },
        Axis::log(cfg.alpha_min, 1.0),
        cfg,
    );
    let alpha = r.x();
    let mut b = breakdown(rate_kernel(g, p, alpha));
    b.alpha_opt = Some(alpha);
    b.converged = r.converged;
    Ok(b)
}

/// The two half-duplex cuts at correlation `rho`.
pub fn half_cuts(g: &NormalizedGains, p: &HalfDuplexPowers, rho: f64) -> (f64, f64) {
    let l = p.lambda;
    let s2 = g.g31 * p.p1_second;
    let r2 = g.g32 * p.p2;
    let c1 = l * gamma(g.g31 * p.p1_first) + (1.0 - l) * gamma(s2 + r2 + 2.0 * rho * (s2 * r2).sqrt());
    let c2 = l * gamma((g.g21 + g.g31) * p.p1_first) + (1.0 - l) * gamma((1.0 - rho * rho) * s2);
    (c1, c2)
}

/// Max over `ρ ∈ [0, 1]` of the smaller cut. The broadcast cut is
/// nondecreasing in ρ and the multiple-access cut nonincreasing, so the
/// optimum is an endpoint or the crossing, found by bisection.
pub fn cutset_half(g: &NormalizedGains, p: &HalfDuplexPowers) -> Result<HalfRateBreakdown> {
    check_lambda(p.lambda)?;
    let diff = |rho: f64| {
        let (a, b) = half_cuts(g, p, rho);
        a - b
    };
    let rho = if diff(0.0) >= 0.0 {
        0.0
    } else if diff(1.0) <= 0.0 {
        // the broadcast cut binds throughout; it is flat without a coherent term
        if half_cuts(g, p, 1.0).0 > half_cuts(g, p, 0.0).0 {
            1.0
        } else {
            0.0
        }
    } else {
        bisect_root(diff, 0.0, 1.0, 1e-12)?
    };
    let (c1, c2) = half_cuts(g, p, rho);
    Ok(HalfRateBreakdown {
        rate: c1.min(c2),
        phase1: 0.0,
        phase2: 0.0,
        alpha_opt: None,
        rho_opt: Some(rho),
        cut1: Some(c1),
        cut2: Some(c2),
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g441() -> NormalizedGains {
        NormalizedGains::new(4.0, 1.0, 4.0).unwrap()
    }

    fn hp(a: f64, b: f64, c: f64, l: f64) -> HalfDuplexPowers {
        HalfDuplexPowers::new(a, b, c, l).unwrap()
    }

    #[test]
    fn quant_noise_examples() {
        let p = hp(0.5, 0.5, 0.5, 0.5);
        // 3.5 / (1.5 (1 + 2/1.5 - 1)) = 1.75
        let q = quant_noise_half(&g441(), &p).unwrap().ratio();
        assert!((q - 1.75).abs() < 1e-14, "{q}");
        assert!(quant_noise_half(&g441(), &hp(0.5, 0.5, 0.0, 0.5)).unwrap().ratio().is_infinite());
        let q0 = quant_noise_half(&g441(), &hp(0.5, 0.5, 0.5, 1e-4)).unwrap().ratio();
        assert_eq!(q0, 0.0);
        let small = quant_noise_half(&g441(), &hp(0.5, 0.5, 0.5, 0.05)).unwrap().ratio();
        assert!(small < 1e-3 && small < q);
    }

    #[test]
    fn ts_quant_noise_examples() {
        let p = hp(0.5, 0.5, 0.5, 0.5);
        // (0.5 + 2.5) / (1 ((1 + 2) - 1)) = 1.5
        let q = ts_quant_noise_half(&g441(), &p, 0.5).unwrap().ratio();
        assert!((q - 1.5).abs() < 1e-14, "{q}");
        assert_eq!(ts_quant_noise_half(&g441(), &p, 1.0).unwrap(), quant_noise_half(&g441(), &p).unwrap());
        assert!(ts_quant_noise_half(&g441(), &hp(0.5, 0.5, 0.0, 0.5), 0.2).unwrap().ratio().is_infinite());
        assert!(ts_quant_noise_half(&g441(), &p, 0.0).is_err());
    }

    #[test]
    fn cf_rate_examples() {
        let g = g441();
        let r = cf_rate_half(&g, &hp(0.5, 0.5, 0.5, 0.5)).unwrap();
        let expect = 0.5 * gamma(0.5 + 2.0 / 2.75) + 0.5 * gamma(0.5);
        assert!((r.rate - expect).abs() < 1e-15);
        assert_eq!(r.rate, r.phase1 + r.phase2);

        let r = cf_rate_half(&g, &hp(0.3, 0.6, 0.0, 0.4)).unwrap();
        assert_eq!(r.rate, 0.4 * gamma(0.3) + 0.6 * gamma(0.6));
        assert_eq!(cf_rate_half(&g, &hp(0.0, 0.0, 0.0, 0.4)).unwrap().rate, 0.0);
    }

    #[test]
    fn ts_rate_examples() {
        let g = g441();
        let p = hp(0.5, 0.5, 0.5, 0.5);
        assert_eq!(ts_cf_rate_half(&g, &p, 1.0).unwrap().rate, cf_rate_half(&g, &p).unwrap().rate);
        assert_eq!(ts_cf_rate_half(&g, &hp(0.0, 0.0, 0.0, 0.5), 0.3).unwrap().rate, 0.0);
        let low = hp(0.005, 0.005, 0.005, 0.5);
        let ts = ts_cf_rate_half(&g, &low, 0.01).unwrap().rate;
        assert!(ts > cf_rate_half(&g, &low).unwrap().rate);
    }

    fn alpha_oracle(g: &NormalizedGains, p: &HalfDuplexPowers) -> (f64, f64) {
        (0..=20000)
            .map(|i| {
                let a = 10f64.powf(-6.0 + 6.0 * i as f64 / 20000.0);
                let (x, y) = rate_kernel(g, p, a);
                (a, x + y)
            })
            .fold((1.0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
    }

    #[test]
    fn optimized_alpha() {
        let cfg = OptimizerConfig::default();
        let g = g441();
        let hi = hp(50.0, 50.0, 50.0, 0.5);
        let (a_star, _) = alpha_oracle(&g, &hi);
        assert_eq!(a_star, 1.0);
        let r = optimize_ts_cf_half(&g, &hi, &cfg).unwrap();
        assert!((r.alpha_opt.unwrap() - 1.0).abs() < 1e-6);

        assert_eq!(optimize_ts_cf_half(&g, &hp(0.0, 0.0, 1.0, 0.5), &cfg).unwrap().rate, 0.0);

        // d = 0.25 at low power: time-sharing helps
        let g = crate::channel::unit_noise_gains(0.25).unwrap();
        let low = hp(0.001, 0.001, 0.002, 0.5);
        let r = optimize_ts_cf_half(&g, &low, &cfg).unwrap();
        let (_, best) = alpha_oracle(&g, &low);
        assert!(r.rate >= best * (1.0 - 1e-9));
        assert!(r.rate > cf_rate_half(&g, &low).unwrap().rate * 1.05);
    }

    fn rho_oracle(g: &NormalizedGains, p: &HalfDuplexPowers) -> f64 {
        (0..=200_000)
            .map(|i| {
                let (a, b) = half_cuts(g, p, i as f64 / 200_000.0);
                a.min(b)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn cutset_examples() {
        let g = g441();
        let p = hp(0.5, 0.5, 0.5, 0.5);
        let c = cutset_half(&g, &p).unwrap();
        let oracle = rho_oracle(&g, &p);
        assert!(c.rate >= oracle - 1e-15);
        assert!((c.rate - oracle).abs() < 1e-9, "{} vs {oracle}", c.rate);
        assert!((c.cut1.unwrap() - c.cut2.unwrap()).abs() < 1e-9);

        let c = cutset_half(&g, &hp(0.5, 0.5, 0.0, 0.5)).unwrap();
        let (a, b) = half_cuts(&g, &hp(0.5, 0.5, 0.0, 0.5), 0.0);
        assert_eq!(c.rho_opt, Some(0.0));
        assert_eq!(c.rate, a.min(b));

        let big = NormalizedGains::new(1e6, 1.0, 4.0).unwrap();
        let c = cutset_half(&big, &p).unwrap();
        assert!((c.rate - rho_oracle(&big, &p)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn half_rate_invariants(
            g21 in 0.0..50.0f64, g31 in 0.0..50.0f64, g32 in 0.0..50.0f64,
            p1a in 0.0..3.0f64, p1b in 0.0..3.0f64, p2 in 0.0..3.0f64, l in 0.02..0.98f64,
        ) {
            let g = NormalizedGains::new(g21, g31, g32).unwrap();
            let p = hp(p1a, p1b, p2, l);
            let cut = cutset_half(&g, &p).unwrap();
            let cf = cf_rate_half(&g, &p).unwrap().rate;
            prop_assert!(cf <= cut.rate + 1e-12);
            let cfg = OptimizerConfig { coarse_points: 64, ..Default::default() };
            let ts = optimize_ts_cf_half(&g, &p, &cfg).unwrap().rate;
            prop_assert!(ts >= cf - 1e-12);
            prop_assert!(ts <= cut.rate + 1e-12);
            let rho = cut.rho_opt.unwrap();
            prop_assert!(
                rho == 0.0 || rho == 1.0 || (cut.cut1.unwrap() - cut.cut2.unwrap()).abs() <= 1e-9
            );
            let q1 = quant_noise_half(&g, &p).unwrap();
            let q2 = ts_quant_noise_half(&g, &p, 1.0).unwrap();
            prop_assert_eq!(q1, q2);
        }

        #[test]
        fn quant_noise_nonincreasing_in_relay(
            g21 in 0.1..20.0f64, g31 in 0.1..20.0f64, g32 in 0.1..20.0f64,
            p1 in 0.01..3.0f64, p2 in 0.01..3.0f64, l in 0.05..0.95f64, k in 1.0..10.0f64,
        ) {
            let g = NormalizedGains::new(g21, g31, g32).unwrap();
            let base = quant_noise_half(&g, &hp(p1, p1, p2, l)).unwrap().ratio();
            let more_p = quant_noise_half(&g, &hp(p1, p1, p2 * k, l)).unwrap().ratio();
            let g_more = NormalizedGains::new(g21, g31, g32 * k).unwrap();
            let more_g = quant_noise_half(&g_more, &hp(p1, p1, p2, l)).unwrap().ratio();
            prop_assert!(more_p <= base * (1.0 + 1e-12));
            prop_assert!(more_g <= base * (1.0 + 1e-12));
        }
    }
}
