//! The marginal families with known closed forms, and cross-checks against the oracles.

use serde::Serialize;

use crate::closed_form::{r_bernoulli, r_binomial, r_geometric, r_poisson, upper_bound};
use crate::error::{Error, Result};
use crate::joint::{min_joint, JointPMF};
use crate::marginal::MarginalSpec;
use crate::oracle::{ace_maxcorr, svd_maxcorr, SpectralReport};
use crate::scheme::OverlapScheme;
use crate::MaxCorrResult;

/// Independent marginals whose overlapping-minima coefficient has a closed form.
///
/// Bernoulli and geometric take one probability per variable; binomial and
/// Poisson are i.i.d. only.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Bernoulli { ps: Vec<f64> },
    Geometric { ps: Vec<f64> },
    Binomial { trials: u64, p: f64 },
    Poisson { rate: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Bernoulli { .. } => "bernoulli",
            Family::Geometric { .. } => "geometric",
            Family::Binomial { .. } => "binomial",
            Family::Poisson { .. } => "poisson",
        }
    }

    pub fn closed_form(&self, scheme: &OverlapScheme) -> Result<MaxCorrResult> {
        match self {
            Family::Bernoulli { ps } => r_bernoulli(ps, scheme),
            Family::Geometric { ps } => r_geometric(ps, scheme),
            Family::Binomial { trials, p } => r_binomial(*trials, *p, scheme),
            Family::Poisson { rate } => r_poisson(*rate, scheme),
        }
    }

    /// The `n` marginal laws of the scheme.
    pub fn marginals(&self, scheme: &OverlapScheme) -> Result<Vec<MarginalSpec>> {
        let n = scheme.n();
        let per_variable = |ps: &[f64], make: fn(f64) -> Result<MarginalSpec>| {
            if ps.len() != n {
                return Err(Error::SchemeMismatch {
                    expected: n,
                    got: ps.len(),
                });
            }
            ps.iter().map(|&p| make(p)).collect()
        };
        match self {
            Family::Bernoulli { ps } => per_variable(ps, MarginalSpec::bernoulli),
            Family::Geometric { ps } => per_variable(ps, MarginalSpec::geometric),
            Family::Binomial { trials, p } => Ok(vec![MarginalSpec::binomial(*trials, *p)?; n]),
            Family::Poisson { rate } => Ok(vec![MarginalSpec::poisson(*rate)?; n]),
        }
    }

    pub fn min_joint(&self, scheme: &OverlapScheme, tail_eps: f64) -> Result<JointPMF> {
        min_joint(&self.marginals(scheme)?, scheme, tail_eps)
    }
}

/// Closed form against both oracles on the exact (truncated) joint table.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub closed_form: f64,
    pub svd: f64,
    pub ace: f64,
    /// Largest pairwise absolute difference among the three values.
    pub max_diff: f64,
    pub truncated_mass: f64,
    pub upper_bound: f64,
    pub spectral: SpectralReport,
    pub table_shape: (usize, usize),
}

impl Verification {
    /// Agreement threshold: `1e-8` plus the cut tail mass.
    pub fn tolerance(&self) -> f64 {
        1e-8 + self.truncated_mass
    }

    pub fn passed(&self) -> bool {
        self.max_diff <= self.tolerance()
    }
}

pub fn verify(
    family: &Family,
    scheme: &OverlapScheme,
    tail_eps: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Verification> {
    let closed = family.closed_form(scheme)?.value;
    let joint = family.min_joint(scheme, tail_eps)?;
    let spectral = svd_maxcorr(&joint)?;
    let ace = ace_maxcorr(&joint, tol, max_iter)?.value;
    let svd = spectral.value;
    let max_diff = (closed - svd)
        .abs()
        .max((closed - ace).abs())
        .max((svd - ace).abs());
    Ok(Verification {
        closed_form: closed,
        svd,
        ace,
        max_diff,
        truncated_mass: joint.truncated_mass(),
        upper_bound: upper_bound(scheme),
        spectral,
        table_shape: (joint.rows(), joint.cols()),
    })
}
