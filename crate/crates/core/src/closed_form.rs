//! Closed-form maximal correlations of overlapping minima.
//!
//! Every formula here reduces to one expression in three log-products: with
//! `P1 = prod_{i<=l} p_i`, `P2 = prod_{l<i<=m} p_i`, `P3 = prod_{m<i<=n} p_i`,
//!
//! ```text
//! R = sqrt(P1 P3) (1 - P2) / sqrt((1 - P1 P2) (1 - P2 P3))
//! ```
//!
//! which is algebraically the Bernoulli formula
//! `(prod_1^n - prod_1^m prod_{l+1}^n) / sqrt(prod_1^m (1 - prod_1^m) prod_{l+1}^n (1 - prod_{l+1}^n))`
//! after cancelling `P2`. Products are accumulated as logs and every `1 - P`
//! goes through `expm1`, so parameters a hair away from 0 or 1 stay accurate.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_prob, Error, Result};
use crate::joint::JointPMF;
use crate::marginal::MarginalSpec;
use crate::numeric::{compensated_sum, ln_one_minus_exp, one_minus_exp};
use crate::scheme::OverlapScheme;
use crate::{MaxCorrResult, Method};

/// Core expression from the three block log-products (all `<= 0`).
fn from_log_products(lp1: f64, lp2: f64, lp3: f64) -> f64 {
    let shared = one_minus_exp(lp2);
    let first = one_minus_exp(lp1 + lp2);
    let second = one_minus_exp(lp2 + lp3);
    let value = (0.5 * (lp1 + lp3)).exp() * shared / (first.sqrt() * second.sqrt());
    value.clamp(0.0, 1.0)
}

/// `R_{m,l}` evaluated from `ln p`. `ln p == 0` returns the `p -> 1-` limit.
fn r_ml_from_log(ln_p: f64, scheme: &OverlapScheme) -> f64 {
    if ln_p == 0.0 {
        return upper_bound(scheme);
    }
    let ell = scheme.ell() as f64;
    let shared = scheme.overlap() as f64;
    let only_second = (scheme.n() - scheme.m()) as f64;
    from_log_products(ell * ln_p, shared * ln_p, only_second * ln_p)
}

fn exact(value: f64) -> MaxCorrResult {
    MaxCorrResult {
        value,
        method: Method::ClosedForm,
        error_budget: 0.0,
    }
}

/// Sharp bound `(m - l) / sqrt(m (n - l))` for i.i.d. variables; attained by continuous laws.
pub fn upper_bound(scheme: &OverlapScheme) -> f64 {
    scheme.overlap() as f64 / ((scheme.block1() * scheme.block2()) as f64).sqrt()
}

/// i.i.d. continuous marginals: the value does not depend on the law.
pub fn r_continuous(scheme: &OverlapScheme) -> MaxCorrResult {
    exact(upper_bound(scheme))
}

/// `R_{m,l}(p)`, the coefficient for i.i.d. Bernoulli(p) variables.
///
/// The endpoints are rejected; their limits are given by [`r_ml_limits`].
pub fn r_ml(p: f64, scheme: &OverlapScheme) -> Result<f64> {
    let p = check_prob("p", p)?;
    Ok(r_ml_from_log(p.ln(), scheme))
}

/// `(R_{m,l}(0+), R_{m,l}(1-)) = (0, upper_bound)`.
pub fn r_ml_limits(scheme: &OverlapScheme) -> (f64, f64) {
    (0.0, upper_bound(scheme))
}

/// Logarithmic derivative `R'/R` of `R_{m,l}` at `p`:
/// `(f(m) - f(b) + f(c) - f(b)) / 2p` with `b = m - l`, `c = n - l`, `f` = [`f_helper`].
pub fn r_ml_log_derivative(p: f64, scheme: &OverlapScheme) -> Result<f64> {
    let p = check_prob("p", p)?;
    let f = |x: usize| f_helper(x as f64, p);
    let b = f(scheme.overlap())?;
    Ok((f(scheme.block1())? - b + f(scheme.block2())? - b) / (2.0 * p))
}

/// `x / (1 - p^x)`, increasing in `x > 0`.
pub fn f_helper(x: f64, p: f64) -> Result<f64> {
    let p = check_prob("p", p)?;
    let x = check_positive("x", x)?;
    Ok(x / one_minus_exp(x * p.ln()))
}

fn check_len(ps: &[f64], scheme: &OverlapScheme) -> Result<()> {
    if ps.len() != scheme.n() {
        return Err(Error::SchemeMismatch {
            expected: scheme.n(),
            got: ps.len(),
        });
    }
    Ok(())
}

/// Independent Bernoulli(p_i) variables, `ps.len() == n`.
pub fn r_bernoulli(ps: &[f64], scheme: &OverlapScheme) -> Result<MaxCorrResult> {
    check_len(ps, scheme)?;
    let logs = ps
        .iter()
        .map(|&p| check_prob("p_i", p).map(f64::ln))
        .collect::<Result<Vec<_>>>()?;
    let [first, shared, second] = scheme.partition();
    let lp = |r: std::ops::Range<usize>| compensated_sum(logs[r].iter().copied());
    Ok(exact(from_log_products(lp(first), lp(shared), lp(second))))
}

/// Independent geometric variables on `{1, 2, ...}` with success probabilities `ps`.
///
/// Equal to [`r_bernoulli`] on the complements `1 - p_i`.
pub fn r_geometric(ps: &[f64], scheme: &OverlapScheme) -> Result<MaxCorrResult> {
    check_len(ps, scheme)?;
    let complements = ps
        .iter()
        .map(|&p| check_prob("p_i", p).map(|p| 1.0 - p))
        .collect::<Result<Vec<_>>>()?;
    r_bernoulli(&complements, scheme)
}

/// i.i.d. Binomial(d, p): `R_{m,l}(1 - (1-p)^d)`.
pub fn r_binomial(d: u64, p: f64, scheme: &OverlapScheme) -> Result<MaxCorrResult> {
    if d == 0 {
        return Err(Error::ParamOutOfRange {
            name: "d",
            value: 0.0,
            constraint: "d >= 1",
        });
    }
    let p = check_prob("p", p)?;
    let ln_q = d as f64 * (-p).ln_1p();
    Ok(exact(r_ml_from_log(ln_one_minus_exp(ln_q), scheme)))
}

/// i.i.d. Poisson(lambda): `R_{m,l}(1 - e^{-lambda})`.
pub fn r_poisson(lambda: f64, scheme: &OverlapScheme) -> Result<MaxCorrResult> {
    let lambda = check_positive("lambda", lambda)?;
    Ok(exact(r_ml_from_log(ln_one_minus_exp(-lambda), scheme)))
}

/// `(min(X1,X2), min(X2,X3))` for independent exponentials with rates `l1, l2, l3`.
pub fn r_marshall_olkin(l1: f64, l2: f64, l3: f64) -> Result<f64> {
    let l1 = check_positive("lambda1", l1)?;
    let l2 = check_positive("lambda2", l2)?;
    let l3 = check_positive("lambda3", l3)?;
    Ok(l2 / ((l1 + l2) * (l2 + l3)).sqrt())
}

/// `P(X >= k | X >= k-1)` for `X ~ Binomial(d, p)`; zero once `k > d`.
pub fn binomial_hazard(d: u64, p: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::ParamOutOfRange {
            name: "k",
            value: 0.0,
            constraint: "k >= 1",
        });
    }
    let spec = MarginalSpec::binomial(d, p)?;
    if k > d {
        return Ok(0.0);
    }
    let k = k as i64;
    Ok(spec.survival(k - 1) / spec.survival(k - 2))
}

/// A 2x2 joint law of `(xi, eta)` on `{a, b} x {c, d}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoJoint {
    p_ac: f64,
    p_ad: f64,
    p_bc: f64,
    p_bd: f64,
}

impl TwoByTwoJoint {
    pub fn new(p_ac: f64, p_ad: f64, p_bc: f64, p_bd: f64) -> Result<Self> {
        let cells = [p_ac, p_ad, p_bc, p_bd];
        if cells.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidJoint(format!(
                "2x2 entries must be finite and >= 0, got {cells:?}"
            )));
        }
        let total: f64 = cells.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidJoint(format!("2x2 entries sum to {total}")));
        }
        let j = Self {
            p_ac,
            p_ad,
            p_bc,
            p_bd,
        };
        let [pa, pb, pc, pd] = j.margins();
        if pa <= 0.0 || pb <= 0.0 || pc <= 0.0 || pd <= 0.0 {
            return Err(Error::DegenerateMargin(format!(
                "2x2 margins must be positive, got a={pa} b={pb} c={pc} d={pd}"
            )));
        }
        Ok(j)
    }

    pub fn cells(&self) -> [[f64; 2]; 2] {
        [[self.p_ac, self.p_ad], [self.p_bc, self.p_bd]]
    }

    /// `[p_a, p_b, p_c, p_d]`.
    pub fn margins(&self) -> [f64; 4] {
        [
            self.p_ac + self.p_ad,
            self.p_bc + self.p_bd,
            self.p_ac + self.p_bc,
            self.p_ad + self.p_bd,
        ]
    }

    /// As a general table with both supports labelled `{0, 1}`.
    pub fn to_joint(&self) -> JointPMF {
        JointPMF::new(
            vec![0, 1],
            vec![0, 1],
            self.cells().iter().map(|r| r.to_vec()).collect(),
            0.0,
        )
        .expect("validated 2x2 table")
    }
}

/// `|det| / sqrt(p_a p_b p_c p_d)`.
pub fn r_two_by_two(j: &TwoByTwoJoint) -> f64 {
    let [pa, pb, pc, pd] = j.margins();
    let det = j.p_ac * j.p_bd - j.p_ad * j.p_bc;
    (det.abs() / (pa * pb * pc * pd).sqrt()).min(1.0)
}

/// Joint law of the two block minima of independent Bernoulli variables, written
/// out cell by cell from the three block products (rows: first minimum 0/1,
/// columns: second minimum 0/1).
pub fn bernoulli_min_table(ps: &[f64], scheme: &OverlapScheme) -> Result<TwoByTwoJoint> {
    check_len(ps, scheme)?;
    for &p in ps {
        check_prob("p_i", p)?;
    }
    let prod = |r: std::ops::Range<usize>| ps[r].iter().product::<f64>();
    let all = prod(0..scheme.n());
    let first = prod(0..scheme.m());
    let second = prod(scheme.ell()..scheme.n());
    TwoByTwoJoint::new(
        1.0 - second - first + all,
        second - all,
        first - all,
        all,
    )
}
