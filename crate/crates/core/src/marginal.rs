//! Integer-supported marginal laws and their survival functions.
//!
//! **Geometric convention:** `Geometric(p)` counts trials up to and including the
//! first success, so its support is `{1, 2, ...}` and `P(X > t) = (1 - p)^t`.
//! Libraries differ on this; the closed forms in [`crate::closed_form`] assume it.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_prob, Error, Result};
use crate::numeric::{binomial_pmf, poisson_pmf, CompensatedSum};

/// Parameters of one marginal law. Build through [`MarginalSpec`] so they are validated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Law {
    Bernoulli { p: f64 },
    Geometric { p: f64 },
    Binomial { trials: u64, p: f64 },
    Poisson { rate: f64 },
    /// Atoms sorted by value, merged, with strictly positive mass.
    FiniteDiscrete { atoms: Vec<(i64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalSpec {
    law: Law,
}

// Cutoff past which a term no longer moves a tail sum.
const TAIL_REL_EPS: f64 = 1e-18;

impl MarginalSpec {
    pub fn new(law: Law) -> Result<Self> {
        let law = match law {
            Law::Bernoulli { p } => Law::Bernoulli {
                p: check_prob("p", p)?,
            },
            Law::Geometric { p } => Law::Geometric {
                p: check_prob("p", p)?,
            },
            Law::Binomial { trials, p } => {
                if trials == 0 {
                    return Err(Error::ParamOutOfRange {
                        name: "d",
                        value: 0.0,
                        constraint: "d >= 1",
                    });
                }
                Law::Binomial {
                    trials,
                    p: check_prob("p", p)?,
                }
            }
            Law::Poisson { rate } => Law::Poisson {
                rate: check_positive("lambda", rate)?,
            },
            Law::FiniteDiscrete { atoms } => Law::FiniteDiscrete {
                atoms: canonical_atoms(atoms)?,
            },
        };
        Ok(Self { law })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(Law::Bernoulli { p })
    }

    pub fn geometric(p: f64) -> Result<Self> {
        Self::new(Law::Geometric { p })
    }

    pub fn binomial(trials: u64, p: f64) -> Result<Self> {
        Self::new(Law::Binomial { trials, p })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        Self::new(Law::Poisson { rate })
    }

    pub fn finite(atoms: Vec<(i64, f64)>) -> Result<Self> {
        Self::new(Law::FiniteDiscrete { atoms })
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    /// Smallest value with positive mass.
    pub fn support_min(&self) -> i64 {
        match &self.law {
            Law::Geometric { .. } => 1,
            Law::FiniteDiscrete { atoms } => atoms[0].0,
            _ => 0,
        }
    }

    /// Largest value with positive mass, if the support is finite.
    pub fn support_max(&self) -> Option<i64> {
        match &self.law {
            Law::Bernoulli { .. } => Some(1),
            Law::Binomial { trials, .. } => Some(*trials as i64),
            Law::FiniteDiscrete { atoms } => atoms.last().map(|a| a.0),
            Law::Geometric { .. } | Law::Poisson { .. } => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.law {
            Law::Bernoulli { p } => *p,
            Law::Geometric { p } => 1.0 / p,
            Law::Binomial { trials, p } => *trials as f64 * p,
            Law::Poisson { rate } => *rate,
            Law::FiniteDiscrete { atoms } => atoms.iter().map(|&(v, w)| v as f64 * w).sum(),
        }
    }

    /// `P(X = k)`.
    pub fn pmf(&self, k: i64) -> f64 {
        match &self.law {
            Law::Bernoulli { p } => match k {
                0 => 1.0 - p,
                1 => *p,
                _ => 0.0,
            },
            Law::Geometric { p } => {
                if k < 1 {
                    0.0
                } else {
                    p * ((k - 1) as f64 * (-p).ln_1p()).exp()
                }
            }
            Law::Binomial { trials, p } => {
                if k < 0 {
                    0.0
                } else {
                    binomial_pmf(*trials, *p, k as u64)
                }
            }
            Law::Poisson { rate } => {
                if k < 0 {
                    0.0
                } else {
                    poisson_pmf(*rate, k as u64)
                }
            }
            Law::FiniteDiscrete { atoms } => atoms
                .binary_search_by_key(&k, |a| a.0)
                .map(|i| atoms[i].1)
                .unwrap_or(0.0),
        }
    }

    /// `P(X > t)`.
    ///
    /// Binomial and Poisson tails sum whichever side of the mean is smaller, with
    /// compensated accumulation, so small upper tails keep full relative accuracy.
    pub fn survival(&self, t: i64) -> f64 {
        if t < self.support_min() {
            return 1.0;
        }
        if let Some(hi) = self.support_max() {
            if t >= hi {
                return 0.0;
            }
        }
        match &self.law {
            Law::Bernoulli { p } => *p,
            Law::Geometric { p } => (t as f64 * (-p).ln_1p()).exp(),
            Law::Binomial { .. } | Law::Poisson { .. } => self.counting_survival(t),
            Law::FiniteDiscrete { atoms } => {
                let start = atoms.partition_point(|a| a.0 <= t);
                let mut acc = CompensatedSum::new();
                for &(_, w) in atoms[start..].iter().rev() {
                    acc.add(w);
                }
                acc.value().clamp(0.0, 1.0)
            }
        }
    }

    fn counting_survival(&self, t: i64) -> f64 {
        let mean = self.mean();
        let upper = self.support_max().unwrap_or(i64::MAX);
        let mut acc = CompensatedSum::new();
        if (t + 1) as f64 >= mean {
            // Upper tail: terms decrease past the mode.
            let mut k = t + 1;
            while k <= upper {
                let w = self.pmf(k);
                acc.add(w);
                if w <= acc.value() * TAIL_REL_EPS {
                    break;
                }
                k += 1;
            }
            acc.value().clamp(0.0, 1.0)
        } else {
            let mut k = t;
            while k >= 0 {
                let w = self.pmf(k);
                acc.add(w);
                if w <= acc.value() * TAIL_REL_EPS && (k as f64) < mean {
                    break;
                }
                k -= 1;
            }
            (1.0 - acc.value()).clamp(0.0, 1.0)
        }
    }

    /// Cumulative table `(k, P(X <= k))` over atoms of positive mass, closed at 1.
    pub(crate) fn quantile_table(&self) -> Vec<(i64, f64)> {
        let mut out = Vec::new();
        let mut acc = CompensatedSum::new();
        let mut k = self.support_min();
        loop {
            let w = self.pmf(k);
            if w > 0.0 {
                acc.add(w);
                out.push((k, acc.value().min(1.0)));
            }
            let done = match self.support_max() {
                Some(hi) => k >= hi,
                None => self.survival(k) < 1e-17,
            };
            if done {
                break;
            }
            k += 1;
        }
        if let Some(last) = out.last_mut() {
            last.1 = 1.0;
        }
        out
    }
}

fn canonical_atoms(mut atoms: Vec<(i64, f64)>) -> Result<Vec<(i64, f64)>> {
    for &(_, w) in &atoms {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "atom probability",
                value: w,
                constraint: "finite and >= 0",
            });
        }
    }
    atoms.sort_by_key(|a| a.0);
    let mut merged: Vec<(i64, f64)> = Vec::with_capacity(atoms.len());
    for (v, w) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }
    merged.retain(|a| a.1 > 0.0);
    let total: f64 = merged.iter().map(|a| a.1).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::ParamOutOfRange {
            name: "total atom mass",
            value: total,
            constraint: "sum within 1e-12 of 1",
        });
    }
    if merged.len() < 2 {
        return Err(Error::DegenerateMargin(
            "finite law needs at least two atoms of positive mass".into(),
        ));
    }
    Ok(merged)
}

/// `P(X > t)` for a validated spec.
pub fn survival(spec: &MarginalSpec, t: i64) -> f64 {
    spec.survival(t)
}
