//! Compress-and-forward rates, cut-set bounds and minimum energy per bit for
//! the three-node Gaussian relay channel at low SNR.
//!
//! The crate covers full-duplex and half-duplex relays. For each mode it
//! evaluates the plain compress-and-forward rate, a time-shared variant that
//! transmits in bursts, and the max-flow min-cut bound. It also computes lower
//! and upper bounds on the minimum energy per bit as power vanishes.
//!
//! ```
//! use lowsnr_relay::{channel::unit_noise_gains, energy, opt::OptimizerConfig};
//!
//! let g = unit_noise_gains(0.75).unwrap();
//! let cfg = OptimizerConfig::default();
//! let lower = energy::ebn0_lower_full(&g).value;
//! let upper = energy::ebn0_upper_full(&g, &cfg).value;
//! assert!(lower <= upper && upper < 2.0 * std::f64::consts::LN_2);
//! ```

pub mod channel;
pub mod energy;
mod error;
pub mod full_duplex;
pub mod half_duplex;
pub mod opt;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/rates.md")]
    mod rates {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
    #[doc = include_str!("../../../book/src/half-duplex-lower.md")]
    mod half_duplex_lower {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
