use thiserror::Error;

/// Errors raised by the rate, bound and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside the domain on which the quantity is defined.
    #[error("{name} = {value} is out of range (expected {expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// `bisect_root` was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: h(lo) = {h_lo}, h(hi) = {h_hi}")]
    NoSignChange { lo: f64, hi: f64, h_lo: f64, h_hi: f64 },

    /// A closed-form expression was evaluated at its singular point.
    #[error("closed form is singular here: {0}")]
    Singular(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check(
    ok: bool,
    name: &'static str,
    value: f64,
    expected: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}
