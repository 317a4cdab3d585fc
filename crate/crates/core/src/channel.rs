//! Channel parameters, the straight-line geometry, power allocations and the
//! Gaussian rate kernel `Γ(x) = ½ log2(1 + x)`.
//!
//! All quantities here are plain values. Rates are in bits per channel use.

use std::f64::consts::LN_2;

use crate::error::{check, Result};

/// Amplitude gains of the three links together with the two receiver noise
/// powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    /// Source to relay.
    pub h21: f64,
    /// Source to destination.
    pub h31: f64,
    /// Relay to destination.
    pub h32: f64,
    /// Noise power at the relay.
    pub n1: f64,
    /// Noise power at the destination.
    pub n: f64,
}

impl ChannelGains {
    pub fn new(h21: f64, h31: f64, h32: f64, n1: f64, n: f64) -> Result<Self> {
        check(h21 >= 0.0 && h21.is_finite(), "h21", h21, "finite, >= 0")?;
        check(h31 >= 0.0 && h31.is_finite(), "h31", h31, "finite, >= 0")?;
        check(h32 >= 0.0 && h32.is_finite(), "h32", h32, "finite, >= 0")?;
        check(n1 > 0.0 && n1.is_finite(), "n1", n1, "finite, > 0")?;
        check(n > 0.0 && n.is_finite(), "n", n, "finite, > 0")?;
        Ok(Self {
            h21,
            h31,
            h32,
            n1,
            n,
        })
    }
}

/// Squared amplitude gain over receiver noise for each link.
///
/// `g21 = h21²/N1`, `g31 = h31²/N`, `g32 = h32²/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedGains {
    pub g21: f64,
    pub g31: f64,
    pub g32: f64,
}

impl NormalizedGains {
    pub fn new(g21: f64, g31: f64, g32: f64) -> Result<Self> {
        check(g21 >= 0.0 && g21.is_finite(), "g21", g21, "finite, >= 0")?;
        check(g31 >= 0.0 && g31.is_finite(), "g31", g31, "finite, >= 0")?;
        check(g32 >= 0.0 && g32.is_finite(), "g32", g32, "finite, >= 0")?;
        Ok(Self { g21, g31, g32 })
    }

    /// Listening fraction `g31 / (g31 + g21)` above which the broadcast cut
    /// can dominate the multiple-access cut for every correlation.
    pub fn lambda_threshold(&self) -> f64 {
        let s = self.g31 + self.g21;
        if s > 0.0 {
            self.g31 / s
        } else {
            1.0
        }
    }
}

/// Source, relay and destination on a line: source to destination distance
/// is 1 and the relay sits at distance `d` from the source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGeometry {
    d: f64,
}

impl LineGeometry {
    pub fn new(d: f64) -> Result<Self> {
        check(d > 0.0 && d < 1.0, "d", d, "0 < d < 1")?;
        Ok(Self { d })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Amplitude gains inversely proportional to distance: `h21 = 1/d`,
    /// `h32 = 1/(1-d)`, `h31 = 1`.
    pub fn channel(&self, n1: f64, n: f64) -> Result<ChannelGains> {
        ChannelGains::new(1.0 / self.d, 1.0, 1.0 / (1.0 - self.d), n1, n)
    }
}

/// Average powers of the full-duplex source and relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullDuplexPowers {
    pub p1: f64,
    pub p2: f64,
}

impl FullDuplexPowers {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        check(p1 >= 0.0 && p1.is_finite(), "p1", p1, "finite, >= 0")?;
        check(p2 >= 0.0 && p2.is_finite(), "p2", p2, "finite, >= 0")?;
        Ok(Self { p1, p2 })
    }
}

/// Half-duplex (time-division) allocation. The relay listens during the
/// first `lambda` fraction of the slot and transmits in the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfDuplexPowers {
    /// Source power while the relay listens.
    pub p1_first: f64,
    /// Source power while the relay transmits.
    pub p1_second: f64,
    /// Relay power in its transmit phase.
    pub p2: f64,
    pub lambda: f64,
}

impl HalfDuplexPowers {
    pub fn new(p1_first: f64, p1_second: f64, p2: f64, lambda: f64) -> Result<Self> {
        check(p1_first >= 0.0 && p1_first.is_finite(), "p1_first", p1_first, "finite, >= 0")?;
        check(p1_second >= 0.0 && p1_second.is_finite(), "p1_second", p1_second, "finite, >= 0")?;
        check(p2 >= 0.0 && p2.is_finite(), "p2", p2, "finite, >= 0")?;
        check_lambda(lambda)?;
        Ok(Self {
            p1_first,
            p1_second,
            p2,
            lambda,
        })
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    check(lambda > 0.0 && lambda < 1.0, "lambda", lambda, "0 < lambda < 1")
}

/// Total power `P` divided as `βP` at the source and `(1-β)P` at the relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    beta: f64,
    total: f64,
}

impl PowerSplit {
    pub fn new(beta: f64, total: f64) -> Result<Self> {
        check(beta > 0.0 && beta <= 1.0, "beta", beta, "0 < beta <= 1")?;
        check(total >= 0.0 && total.is_finite(), "power", total, "finite, >= 0")?;
        Ok(Self { beta, total })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn full_duplex(&self) -> FullDuplexPowers {
        FullDuplexPowers {
            p1: self.beta * self.total,
            p2: (1.0 - self.beta) * self.total,
        }
    }

    /// The source keeps the same power `βP` in both phases.
    pub fn half_duplex(&self, lambda: f64) -> Result<HalfDuplexPowers> {
        let p1 = self.beta * self.total;
        HalfDuplexPowers::new(p1, p1, (1.0 - self.beta) * self.total, lambda)
    }

    /// Half-duplex source share for which the source and relay spend the same
    /// average power over a slot: `β = (1-λ)(1-β)` gives `β = (1-λ)/(2-λ)`.
    pub fn equal_average_beta(lambda: f64) -> f64 {
        (1.0 - lambda) / (2.0 - lambda)
    }
}

/// Duty cycle `alpha` of the active phase and the peak ratio `A = P/α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSharingPoint {
    alpha: f64,
    a_ratio: f64,
}

impl TimeSharingPoint {
    pub fn new(alpha: f64, a_ratio: f64) -> Result<Self> {
        check(alpha > 0.0 && alpha <= 1.0, "alpha", alpha, "0 < alpha <= 1")?;
        check(a_ratio >= 0.0 && a_ratio.is_finite(), "a_ratio", a_ratio, "finite, >= 0")?;
        Ok(Self { alpha, a_ratio })
    }

    pub fn from_power(total: f64, alpha: f64) -> Result<Self> {
        check(total >= 0.0 && total.is_finite(), "power", total, "finite, >= 0")?;
        Self::new(alpha, total / alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a_ratio(&self) -> f64 {
        self.a_ratio
    }

    pub fn power(&self) -> f64 {
        self.alpha * self.a_ratio
    }
}

/// `Γ(x) = ½ log2(1 + x)` in bits per channel use.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check(x >= 0.0, "x", x, ">= 0")?;
    Ok(gamma(x))
}

#[inline]
pub(crate) fn gamma(x: f64) -> f64 {
    debug_assert!(x >= 0.0 || x.is_nan(), "gamma({x})");
    0.5 * x.ln_1p() / LN_2
}

pub fn normalize(gains: &ChannelGains) -> NormalizedGains {
    NormalizedGains {
        g21: gains.h21 * gains.h21 / gains.n1,
        g31: gains.h31 * gains.h31 / gains.n,
        g32: gains.h32 * gains.h32 / gains.n,
    }
}

pub fn gains_from_geometry(geom: LineGeometry, n1: f64, n: f64) -> Result<NormalizedGains> {
    Ok(normalize(&geom.channel(n1, n)?))
}

/// Normalized gains of the line geometry with unit noise at both receivers.
pub fn unit_noise_gains(d: f64) -> Result<NormalizedGains> {
    gains_from_geometry(LineGeometry::new(d)?, 1.0, 1.0)
}
