//! Seeded sampling of the two block minima and empirical maximal correlation.
//!
//! Randomness comes from ChaCha8, a counter-based generator: replicate `r` of a
//! run with seed `s` reads stream `r` of the generator keyed by `s`, so each
//! replicate is reproducible on its own and the set of results does not depend
//! on the order (or thread) in which replicates run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint::JointPMF;
use crate::marginal::{Law, MarginalSpec};
use crate::oracle::svd_maxcorr;
use crate::scheme::OverlapScheme;
use crate::{MaxCorrResult, Method};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCConfig {
    n_samples: usize,
    seed: u64,
    replicates: usize,
}

impl MCConfig {
    pub fn new(n_samples: usize, seed: u64, replicates: usize) -> Result<Self> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::InvalidConfig(format!(
                "n_samples must be at least {MIN_SAMPLES}, got {n_samples}"
            )));
        }
        if replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        Ok(Self {
            n_samples,
            seed,
            replicates,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }
}

fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Inverse-CDF sampler for one marginal.
enum Sampler {
    Bernoulli(f64),
    /// `ln(1 - p)`.
    Geometric(f64),
    /// Cumulative `(value, P(X <= value))`.
    Table(Vec<(i64, f64)>),
}

impl Sampler {
    fn new(spec: &MarginalSpec) -> Self {
        match spec.law() {
            Law::Bernoulli { p } => Sampler::Bernoulli(*p),
            Law::Geometric { p } => Sampler::Geometric((-p).ln_1p()),
            _ => Sampler::Table(spec.quantile_table()),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        match self {
            Sampler::Bernoulli(p) => (u < *p) as i64,
            Sampler::Geometric(ln_q) => {
                // P(X > t) = q^t: X is the least t >= 1 with q^t <= 1 - u.
                let t = ((-u).ln_1p() / ln_q).ceil();
                if t < 1.0 {
                    1
                } else {
                    t as i64
                }
            }
            Sampler::Table(cdf) => {
                let i = cdf.partition_point(|c| c.1 <= u).min(cdf.len() - 1);
                cdf[i].0
            }
        }
    }
}

fn empirical_table<R: Rng>(
    samplers: &[Sampler],
    scheme: &OverlapScheme,
    n_samples: usize,
    rng: &mut R,
) -> JointPMF {
    let mut counts: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let mut xs = vec![0i64; samplers.len()];
    for _ in 0..n_samples {
        for (x, s) in xs.iter_mut().zip(samplers) {
            *x = s.draw(rng);
        }
        let u = *xs[..scheme.m()].iter().min().unwrap();
        let v = *xs[scheme.ell()..].iter().min().unwrap();
        *counts.entry((u, v)).or_insert(0) += 1;
    }
    let mut support_u: Vec<i64> = counts.keys().map(|k| k.0).collect();
    support_u.dedup();
    let mut support_v: Vec<i64> = counts.keys().map(|k| k.1).collect();
    support_v.sort_unstable();
    support_v.dedup();
    let mut probs = vec![vec![0.0; support_v.len()]; support_u.len()];
    let n = n_samples as f64;
    for ((u, v), c) in counts {
        let i = support_u.binary_search(&u).unwrap();
        let j = support_v.binary_search(&v).unwrap();
        probs[i][j] = c as f64 / n;
    }
    JointPMF::new(support_u, support_v, probs, 0.0).expect("empirical frequencies form a table")
}

fn check_inputs(marginals: &[MarginalSpec], scheme: &OverlapScheme) -> Result<Vec<Sampler>> {
    if marginals.len() != scheme.n() {
        return Err(Error::SchemeMismatch {
            expected: scheme.n(),
            got: marginals.len(),
        });
    }
    Ok(marginals.iter().map(Sampler::new).collect())
}

/// Empirical joint table of `(U, V)` from `n_samples` draws on replicate stream 0.
pub fn sample_minima(
    marginals: &[MarginalSpec],
    scheme: &OverlapScheme,
    cfg: &MCConfig,
) -> Result<JointPMF> {
    let samplers = check_inputs(marginals, scheme)?;
    let mut rng = replicate_rng(cfg.seed, 0);
    Ok(empirical_table(&samplers, scheme, cfg.n_samples, &mut rng))
}

/// One replicate's empirical coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateEstimate {
    pub replicate: usize,
    pub n_samples: usize,
    pub estimate: f64,
}

fn run_replicate(
    samplers: &[Sampler],
    scheme: &OverlapScheme,
    cfg: &MCConfig,
    replicate: usize,
) -> Result<ReplicateEstimate> {
    let mut rng = replicate_rng(cfg.seed, replicate);
    let table = empirical_table(samplers, scheme, cfg.n_samples, &mut rng);
    let estimate = match svd_maxcorr(&table) {
        Ok(r) => r.value,
        // One redraw from the same stream, then give up.
        Err(Error::DegenerateMargin(_)) => {
            let table = empirical_table(samplers, scheme, cfg.n_samples, &mut rng);
            svd_maxcorr(&table)?.value
        }
        Err(e) => return Err(e),
    };
    Ok(ReplicateEstimate {
        replicate,
        n_samples: cfg.n_samples,
        estimate,
    })
}

/// Per-replicate empirical coefficients, in replicate order.
pub fn mc_replicates(
    marginals: &[MarginalSpec],
    scheme: &OverlapScheme,
    cfg: &MCConfig,
) -> Result<Vec<ReplicateEstimate>> {
    let samplers = check_inputs(marginals, scheme)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| run_replicate(&samplers, scheme, cfg, r))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..cfg.replicates)
            .map(|r| run_replicate(&samplers, scheme, cfg, r))
            .collect()
    }
}

/// Mean and standard error of per-replicate estimates.
pub fn summarize(estimates: &[ReplicateEstimate]) -> MaxCorrResult {
    let k = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.estimate).sum::<f64>() / k;
    let se = if estimates.len() > 1 {
        let var = estimates
            .iter()
            .map(|e| (e.estimate - mean).powi(2))
            .sum::<f64>()
            / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    MaxCorrResult {
        value: mean.clamp(0.0, 1.0),
        method: Method::MonteCarlo,
        error_budget: se,
    }
}

/// Mean over replicates of the spectral coefficient of each empirical table;
/// the error budget is the standard error across replicates.
pub fn mc_maxcorr(
    marginals: &[MarginalSpec],
    scheme: &OverlapScheme,
    cfg: &MCConfig,
) -> Result<MaxCorrResult> {
    Ok(summarize(&mc_replicates(marginals, scheme, cfg)?))
}
