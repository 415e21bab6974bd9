use thiserror::Error;

use crate::MaxCorrResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid overlap scheme (n={n}, m={m}, l={ell}): requires 1 <= l+1 <= m <= n")]
    SchemeInvalid { n: i64, m: i64, ell: i64 },

    #[error("parameter {name} = {value} out of range: requires {constraint}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("scheme expects {expected} marginals, got {got}")]
    SchemeMismatch { expected: usize, got: usize },

    #[error("degenerate margin: {0}")]
    DegenerateMargin(String),

    #[error("truncation point would exceed {cap} (tail_eps too small for these marginals)")]
    TruncationFailure { cap: i64 },

    #[error("table would have {entries} entries, above the cap of {cap}")]
    SizeCap { entries: u128, cap: u128 },

    #[error("no convergence after {iterations} iterations (last value {}, delta {})", .last.value, .last.error_budget)]
    NoConvergence { last: MaxCorrResult, iterations: usize },

    #[error("invalid joint table: {0}")]
    InvalidJoint(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_prob(name: &'static str, p: f64) -> Result<f64> {
    if p.is_finite() && p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: p,
            constraint: "0 < value < 1",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: x,
            constraint: "finite and > 0",
        })
    }
}
