//! Maximal correlation of overlapping minima of independent random variables.
//!
//! For independent `X_1..X_n` and an [`OverlapScheme`] `(n, m, l)`, this crate
//! computes `R(min_{i<=m} X_i, min_{l<i<=n} X_i)`, the Hirschfeld-Gebelein-Renyi
//! maximal correlation of the two block minima, in three ways:
//!
//! - [`closed_form`]: exact formulas for continuous, Bernoulli, geometric,
//!   binomial and Poisson marginals, plus the Marshall-Olkin exponential case;
//! - [`oracle`]: the second singular value of an explicit joint table built by
//!   [`joint::min_joint`], cross-checked by alternating conditional expectations;
//! - [`montecarlo`]: seeded sampling of empirical tables.
//!
//! ```
//! use maxcorr::{closed_form, joint, oracle, MarginalSpec, OverlapScheme};
//!
//! let scheme = OverlapScheme::new(3, 2, 1).unwrap();
//! let exact = closed_form::r_geometric(&[0.5, 0.5, 0.5], &scheme).unwrap();
//! let specs = vec![MarginalSpec::geometric(0.5).unwrap(); 3];
//! let table = joint::min_joint(&specs, &scheme, 1e-12).unwrap();
//! let spectral = oracle::svd_maxcorr(&table).unwrap();
//! assert!((exact.value - spectral.value).abs() < 1e-8);
//! ```

pub mod closed_form;
pub mod error;
pub mod family;
pub mod joint;
pub mod marginal;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod scheme;
mod svd;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use family::Family;
pub use joint::JointPMF;
pub use marginal::{Law, MarginalSpec};
pub use montecarlo::MCConfig;
pub use oracle::SpectralReport;
pub use scheme::{validate_scheme, OverlapScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    SvdOracle,
    AceOracle,
    MonteCarlo,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::SvdOracle => "svd_oracle",
            Method::AceOracle => "ace_oracle",
            Method::MonteCarlo => "monte_carlo",
        })
    }
}

/// A maximal correlation value in `[0, 1]` with how it was obtained.
///
/// `error_budget` is zero for closed forms, the cut tail mass for the spectral
/// oracle, the last iterate change for ACE, and the standard error across
/// replicates for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxCorrResult {
    pub value: f64,
    pub method: Method,
    pub error_budget: f64,
}
