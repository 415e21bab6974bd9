//! Finite bivariate tables for the pair of block minima.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginal::MarginalSpec;
use crate::numeric::{compensated_sum, one_minus_exp, CompensatedSum};
use crate::scheme::OverlapScheme;

/// Largest truncation point `min_joint` will accept.
pub const TRUNCATION_CAP: i64 = 10_000_000;
/// Largest table (in cells) any builder will allocate.
pub const TABLE_SIZE_CAP: u128 = 100_000_000;

/// Joint mass table of `(U, V)` on integer supports.
///
/// Rows follow `support_u`, columns `support_v`; both are strictly increasing and
/// carry no all-zero row or column. `truncated_mass` is the probability that was
/// cut off with an infinite support, so `sum(probs) + truncated_mass == 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointPMF {
    support_u: Vec<i64>,
    support_v: Vec<i64>,
    probs: Vec<Vec<f64>>,
    truncated_mass: f64,
}

#[derive(Deserialize)]
struct RawJoint {
    support_u: Vec<i64>,
    support_v: Vec<i64>,
    probs: Vec<Vec<f64>>,
    truncated_mass: f64,
}

impl TryFrom<RawJoint> for JointPMF {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        JointPMF::new(raw.support_u, raw.support_v, raw.probs, raw.truncated_mass)
    }
}

const MASS_TOL: f64 = 1e-9;

impl JointPMF {
    /// Validates a table and prunes zero-mass rows and columns.
    pub fn new(
        support_u: Vec<i64>,
        support_v: Vec<i64>,
        probs: Vec<Vec<f64>>,
        truncated_mass: f64,
    ) -> Result<Self> {
        if probs.len() != support_u.len() || probs.iter().any(|r| r.len() != support_v.len()) {
            return Err(Error::InvalidJoint(format!(
                "table shape does not match supports {}x{}",
                support_u.len(),
                support_v.len()
            )));
        }
        if support_u.windows(2).any(|w| w[0] >= w[1]) || support_v.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidJoint("supports must be strictly increasing".into()));
        }
        if !(truncated_mass.is_finite() && (0.0..=1.0).contains(&truncated_mass)) {
            return Err(Error::InvalidJoint(format!(
                "truncated mass {truncated_mass} outside [0, 1]"
            )));
        }
        let mut total = CompensatedSum::new();
        for &x in probs.iter().flatten() {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidJoint(format!("bad cell probability {x}")));
            }
            total.add(x);
        }
        if (total.value() + truncated_mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidJoint(format!(
                "cells sum to {} with truncated mass {truncated_mass}",
                total.value()
            )));
        }
        let keep_rows: Vec<usize> = (0..probs.len())
            .filter(|&i| probs[i].iter().any(|&x| x > 0.0))
            .collect();
        let keep_cols: Vec<usize> = (0..support_v.len())
            .filter(|&j| probs.iter().any(|r| r[j] > 0.0))
            .collect();
        if keep_rows.is_empty() {
            return Err(Error::InvalidJoint("table has no mass".into()));
        }
        let probs = keep_rows
            .iter()
            .map(|&i| keep_cols.iter().map(|&j| probs[i][j]).collect())
            .collect();
        Ok(Self {
            support_u: keep_rows.iter().map(|&i| support_u[i]).collect(),
            support_v: keep_cols.iter().map(|&j| support_v[j]).collect(),
            probs,
            truncated_mass,
        })
    }

    pub fn support_u(&self) -> &[i64] {
        &self.support_u
    }

    pub fn support_v(&self) -> &[i64] {
        &self.support_v
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    pub fn rows(&self) -> usize {
        self.support_u.len()
    }

    pub fn cols(&self) -> usize {
        self.support_v.len()
    }

    /// `P(U = u, V = v)` by support value; zero off the table.
    pub fn prob(&self, u: i64, v: i64) -> f64 {
        match (self.support_u.binary_search(&u), self.support_v.binary_search(&v)) {
            (Ok(i), Ok(j)) => self.probs[i][j],
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &x in self.probs.iter().flatten() {
            acc.add(x);
        }
        acc.value()
    }

    /// Row sums.
    pub fn marginal_u(&self) -> Vec<f64> {
        self.probs
            .iter()
            .map(|r| crate::numeric::compensated_sum(r.iter().copied()))
            .collect()
    }

    /// Column sums.
    pub fn marginal_v(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|j| crate::numeric::compensated_sum(self.probs.iter().map(|r| r[j])))
            .collect()
    }

    pub fn transpose(&self) -> JointPMF {
        JointPMF {
            support_u: self.support_v.clone(),
            support_v: self.support_u.clone(),
            probs: (0..self.cols())
                .map(|j| self.probs.iter().map(|r| r[j]).collect())
                .collect(),
            truncated_mass: self.truncated_mass,
        }
    }

    /// CSV layout: header `u\v,<v support...>`, then one row per `u` value.
    pub fn to_csv(&self) -> String {
        self.to_csv_with(|x| format!("{x:e}"))
    }

    pub fn to_csv_with(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::from("u\\v");
        for v in &self.support_v {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
        for (u, row) in self.support_u.iter().zip(&self.probs) {
            out.push_str(&u.to_string());
            for &x in row {
                out.push(',');
                out.push_str(&fmt(x));
            }
            out.push('\n');
        }
        out
    }
}

/// Survival of the minimum of a block: the product of the member survivals.
fn block_survival(members: &[MarginalSpec], t: i64) -> f64 {
    members.iter().map(|s| s.survival(t)).product()
}

/// Law of the minimum of a group on `[lo, hi]`, kept as survivals and point masses.
///
/// `P(min = k) = S(k - 1) * (1 - prod_i (1 - h_i(k)))` with the member hazards
/// `h_i(k) = P(X_i = k) / P(X_i >= k)`, which avoids subtracting survivals.
/// An empty group is a minimum over nothing, i.e. `+inf`.
struct GroupLaw {
    lo: i64,
    survival: Vec<f64>,
    pmf: Vec<f64>,
}

impl GroupLaw {
    fn new(members: &[MarginalSpec], lo: i64, hi: i64) -> Self {
        let surv: Vec<Vec<f64>> = members
            .iter()
            .map(|s| (lo - 1..=hi).map(|t| s.survival(t)).collect())
            .collect();
        let survival = (0..(hi - lo + 2) as usize)
            .map(|i| surv.iter().map(|s| s[i]).product())
            .collect::<Vec<f64>>();
        let pmf = (lo..=hi)
            .enumerate()
            .map(|(i, k)| {
                if survival[i] == 0.0 {
                    return 0.0;
                }
                let hazards: Vec<f64> = members
                    .iter()
                    .zip(&surv)
                    .map(|(s, sv)| (s.pmf(k) / sv[i]).min(1.0))
                    .collect();
                if hazards.contains(&1.0) {
                    // some member has no mass beyond k
                    return survival[i];
                }
                let log_stay = compensated_sum(hazards.iter().map(|h| (-h).ln_1p()));
                survival[i] * one_minus_exp(log_stay)
            })
            .collect();
        Self { lo, survival, pmf }
    }

    /// `P(min > t)` for `t` in `[lo - 1, hi]`.
    fn survival(&self, t: i64) -> f64 {
        self.survival[(t - self.lo + 1) as usize]
    }

    fn pmf(&self, k: i64) -> f64 {
        self.pmf[(k - self.lo) as usize]
    }
}

fn block_bounds(members: &[MarginalSpec]) -> (i64, Option<i64>) {
    let lo = members.iter().map(|s| s.support_min()).min().unwrap();
    let hi = members.iter().filter_map(|s| s.support_max()).min();
    (lo, hi)
}

/// Smallest `k >= start` with `tail(k) <= eps`, for non-increasing `tail`.
fn truncation_point(start: i64, eps: f64, tail: impl Fn(i64) -> f64) -> Result<i64> {
    if tail(start) <= eps {
        return Ok(start);
    }
    let mut bad = start;
    let mut step = 1i64;
    let mut good = loop {
        let k = start + step;
        if k > TRUNCATION_CAP {
            if tail(TRUNCATION_CAP) <= eps {
                break TRUNCATION_CAP;
            }
            return Err(Error::TruncationFailure {
                cap: TRUNCATION_CAP,
            });
        }
        if tail(k) <= eps {
            break k;
        }
        bad = k;
        step *= 2;
    };
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if tail(mid) <= eps {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Exact joint law of `(min_{i<=m} X_i, min_{l<i<=n} X_i)` on a truncated rectangle.
///
/// Writing `U = min(A, W)` and `V = min(W, C)` for the minima `A`, `W`, `C` of
/// the three index groups, every cell is a sum of products of group
/// probabilities, so small cells keep full relative accuracy. Infinite supports are cut at the smallest `K` with
/// `P(U > K) + P(V > K) <= tail_eps`; finite supports are never cut.
pub fn min_joint(
    marginals: &[MarginalSpec],
    scheme: &OverlapScheme,
    tail_eps: f64,
) -> Result<JointPMF> {
    if marginals.len() != scheme.n() {
        return Err(Error::SchemeMismatch {
            expected: scheme.n(),
            got: marginals.len(),
        });
    }
    if !(tail_eps > 0.0 && tail_eps <= 1e-3) {
        return Err(Error::ParamOutOfRange {
            name: "tail_eps",
            value: tail_eps,
            constraint: "0 < tail_eps <= 1e-3",
        });
    }
    let [only_first, shared, only_second] = scheme.partition();
    let block_u = &marginals[..scheme.m()];
    let block_v = &marginals[scheme.ell()..];
    let (lo_u, max_u) = block_bounds(block_u);
    let (lo_v, max_v) = block_bounds(block_v);

    let (hi_u, hi_v) = match (max_u, max_v) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let tail = |k: i64| {
                let su = if max_u.is_some_and(|a| k >= a) { 0.0 } else { block_survival(block_u, k) };
                let sv = if max_v.is_some_and(|b| k >= b) { 0.0 } else { block_survival(block_v, k) };
                su + sv
            };
            let k = truncation_point(lo_u.min(lo_v), tail_eps, tail)?;
            (max_u.map_or(k, |a| a.min(k)), max_v.map_or(k, |b| b.min(k)))
        }
    };
    let rows = (hi_u - lo_u + 1).max(0) as u128;
    let cols = (hi_v - lo_v + 1).max(0) as u128;
    if rows * cols > TABLE_SIZE_CAP {
        return Err(Error::SizeCap {
            entries: rows * cols,
            cap: TABLE_SIZE_CAP,
        });
    }

    let lo = lo_u.min(lo_v);
    let hi = hi_u.max(hi_v);
    let first = GroupLaw::new(&marginals[only_first], lo, hi);
    let both = GroupLaw::new(&marginals[shared], lo, hi);
    let second = GroupLaw::new(&marginals[only_second], lo, hi);
    let law_u = GroupLaw::new(block_u, lo, hi);
    let law_v = GroupLaw::new(block_v, lo, hi);

    // U = min(A, W), V = min(W, C) with A, W, C the three group minima.
    let cell = |u: i64, v: i64| match u.cmp(&v) {
        Ordering::Less => first.pmf(u) * law_v.pmf(v),
        Ordering::Greater => second.pmf(v) * law_u.pmf(u),
        Ordering::Equal => {
            both.pmf(u) * first.survival(u - 1) * second.survival(u - 1)
                + both.survival(u) * first.pmf(u) * second.pmf(u)
        }
    };
    let support_u: Vec<i64> = (lo_u..=hi_u).collect();
    let support_v: Vec<i64> = (lo_v..=hi_v).collect();
    let mut probs: Vec<Vec<f64>> = support_u
        .iter()
        .map(|&u| support_v.iter().map(|&v| cell(u, v)).collect())
        .collect();

    let tail_u = block_survival(block_u, hi_u);
    let tail_v = block_survival(block_v, hi_v);
    let h = first.survival(hi_u) * both.survival(hi_u.max(hi_v)) * second.survival(hi_v);
    let truncated_mass = (tail_u + tail_v - h).clamp(0.0, 1.0);
    let target = 1.0 - truncated_mass;
    let mut acc = CompensatedSum::new();
    for &x in probs.iter().flatten() {
        acc.add(x);
    }
    let scale = target / acc.value();
    for x in probs.iter_mut().flatten() {
        *x *= scale;
    }
    JointPMF::new(support_u, support_v, probs, truncated_mass)
}

/// Pushforward of `joint` under `(u_map, v_map)`.
pub fn coarsen(
    joint: &JointPMF,
    u_map: impl Fn(i64) -> i64,
    v_map: impl Fn(i64) -> i64,
) -> JointPMF {
    let mut cells: BTreeMap<(i64, i64), CompensatedSum> = BTreeMap::new();
    for (i, &u) in joint.support_u.iter().enumerate() {
        let fu = u_map(u);
        for (j, &v) in joint.support_v.iter().enumerate() {
            cells.entry((fu, v_map(v))).or_default().add(joint.probs[i][j]);
        }
    }
    let mut support_u: Vec<i64> = cells.keys().map(|k| k.0).collect();
    support_u.dedup();
    let mut support_v: Vec<i64> = cells.keys().map(|k| k.1).collect();
    support_v.sort_unstable();
    support_v.dedup();
    let mut probs = vec![vec![0.0; support_v.len()]; support_u.len()];
    for ((u, v), mass) in cells {
        let i = support_u.binary_search(&u).unwrap();
        let j = support_v.binary_search(&v).unwrap();
        probs[i][j] = mass.value();
    }
    JointPMF::new(support_u, support_v, probs, joint.truncated_mass)
        .expect("pushforward of a valid table is valid")
}

/// Joint of `((U_a, U_b), (V_a, V_b))` for independent pairs.
///
/// A paired value `(x_a, x_b)` is labelled by its row-major index
/// `index_a * len_b + index_b` into the two supports.
pub fn product_joint(a: &JointPMF, b: &JointPMF) -> Result<JointPMF> {
    let rows = (a.rows() * b.rows()) as u128;
    let cols = (a.cols() * b.cols()) as u128;
    if rows * cols > TABLE_SIZE_CAP {
        return Err(Error::SizeCap {
            entries: rows * cols,
            cap: TABLE_SIZE_CAP,
        });
    }
    let mut probs = vec![vec![0.0; cols as usize]; rows as usize];
    for (ia, ra) in a.probs.iter().enumerate() {
        for (ib, rb) in b.probs.iter().enumerate() {
            let row = &mut probs[ia * b.rows() + ib];
            for (ja, &pa) in ra.iter().enumerate() {
                for (jb, &pb) in rb.iter().enumerate() {
                    row[ja * b.cols() + jb] = pa * pb;
                }
            }
        }
    }
    let ta = a.truncated_mass;
    let tb = b.truncated_mass;
    JointPMF::new(
        (0..rows as i64).collect(),
        (0..cols as i64).collect(),
        probs,
        ta + tb - ta * tb,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::bernoulli_min_table;

    fn scheme(n: usize, m: usize, l: usize) -> OverlapScheme {
        OverlapScheme::new(n, m, l).unwrap()
    }

    /// Enumerates all tuples with every coordinate in `[lo, k]` plus a lumped
    /// `k + 1` state carrying `P(X > k)`, then tallies the two block minima.
    /// Cells with both coordinates `<= k` are exact.
    fn enumerate_minima(
        marginals: &[MarginalSpec],
        s: &OverlapScheme,
        lo: i64,
        k: i64,
    ) -> BTreeMap<(i64, i64), f64> {
        let states: Vec<Vec<(i64, f64)>> = marginals
            .iter()
            .map(|m| {
                let mut v: Vec<(i64, f64)> = (lo..=k).map(|x| (x, m.pmf(x))).collect();
                v.push((k + 1, m.survival(k)));
                v
            })
            .collect();
        let mut out = BTreeMap::new();
        let mut idx = vec![0usize; marginals.len()];
        loop {
            let mut w = 1.0;
            let xs: Vec<i64> = idx
                .iter()
                .zip(&states)
                .map(|(&i, st)| {
                    w *= st[i].1;
                    st[i].0
                })
                .collect();
            let u = *xs[..s.m()].iter().min().unwrap();
            let v = *xs[s.ell()..].iter().min().unwrap();
            *out.entry((u, v)).or_insert(0.0) += w;
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < states[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn bernoulli_reproduces_min_table() {
        for &(ps, s) in &[
            (&[0.9, 0.8, 0.7][..], scheme(3, 2, 1)),
            (&[0.5, 0.5, 0.5][..], scheme(3, 2, 1)),
            (&[0.3, 0.6, 0.2, 0.9, 0.55][..], scheme(5, 3, 1)),
            (&[0.25, 0.75, 0.4, 0.6][..], scheme(4, 4, 0)),
        ] {
            let specs: Vec<_> = ps.iter().map(|&p| MarginalSpec::bernoulli(p).unwrap()).collect();
            let j = min_joint(&specs, &s, 1e-6).unwrap();
            let t = bernoulli_min_table(ps, &s).unwrap().cells();
            assert_eq!(j.truncated_mass(), 0.0);
            for u in 0..2 {
                for v in 0..2 {
                    assert!((j.prob(u, v) - t[u as usize][v as usize]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn geometric_matches_enumeration() {
        let s = scheme(3, 2, 1);
        let specs = vec![MarginalSpec::geometric(0.5).unwrap(); 3];
        let j = min_joint(&specs, &s, 1e-12).unwrap();
        assert!((j.prob(1, 1) - 0.625).abs() < 1e-15);
        let brute = enumerate_minima(&specs, &s, 1, 12);
        for (&(u, v), &w) in &brute {
            if u <= 12 && v <= 12 {
                assert!((j.prob(u, v) - w).abs() < 1e-15, "({u},{v})");
            }
        }
        // min of two Geometric(1/2) is Geometric(3/4)
        let rows = j.marginal_u();
        for (i, &u) in j.support_u().iter().enumerate() {
            let want = 0.75 * 0.25f64.powi((u - 1) as i32);
            assert!((rows[i] - want).abs() <= 1e-12 + j.truncated_mass());
        }
        assert!(j.truncated_mass() <= 1e-12);
        assert!((j.total_mass() + j.truncated_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_families_match_enumeration() {
        let s = scheme(4, 3, 1);
        let specs = vec![
            MarginalSpec::poisson(1.3).unwrap(),
            MarginalSpec::binomial(5, 0.4).unwrap(),
            MarginalSpec::finite(vec![(0, 0.2), (2, 0.5), (3, 0.3)]).unwrap(),
            MarginalSpec::poisson(0.7).unwrap(),
        ];
        let j = min_joint(&specs, &s, 1e-12).unwrap();
        let brute = enumerate_minima(&specs, &s, 0, 8);
        for (&(u, v), &w) in &brute {
            if u <= 8 && v <= 8 {
                assert!((j.prob(u, v) - w).abs() < 1e-15, "({u},{v}) {} vs {w}", j.prob(u, v));
            }
        }
        // finite support in the first block caps U
        assert!(*j.support_u().last().unwrap() <= 3);
        // zero-mass value 1 of the finite law still appears via the others
        assert!(j.support_u().contains(&1));
    }

    #[test]
    fn single_variable_scheme_is_diagonal() {
        let spec = MarginalSpec::poisson(2.0).unwrap();
        let j = min_joint(std::slice::from_ref(&spec), &scheme(1, 1, 0), 1e-10).unwrap();
        for (i, &u) in j.support_u().iter().enumerate() {
            for (jj, &v) in j.support_v().iter().enumerate() {
                if u == v {
                    assert!((j.probs()[i][jj] - spec.pmf(u)).abs() < 1e-15);
                } else {
                    assert_eq!(j.probs()[i][jj], 0.0);
                }
            }
        }
    }

    #[test]
    fn survival_recovered_from_table() {
        let s = scheme(3, 2, 1);
        let specs = vec![
            MarginalSpec::geometric(0.3).unwrap(),
            MarginalSpec::geometric(0.6).unwrap(),
            MarginalSpec::geometric(0.45).unwrap(),
        ];
        let j = min_joint(&specs, &s, 1e-12).unwrap();
        let h = |u: i64, v: i64| {
            specs[0].survival(u) * specs[1].survival(u.max(v)) * specs[2].survival(v)
        };
        // P(U >= u, V >= v) from the table equals H(u-1, v-1) up to the cut mass
        for &u in j.support_u() {
            for &v in j.support_v() {
                let mut acc = 0.0;
                for (i, &uu) in j.support_u().iter().enumerate() {
                    for (jj, &vv) in j.support_v().iter().enumerate() {
                        if uu >= u && vv >= v {
                            acc += j.probs()[i][jj];
                        }
                    }
                }
                assert!((acc - h(u - 1, v - 1)).abs() <= 1e-12 + j.truncated_mass());
            }
        }
    }

    #[test]
    fn input_errors() {
        let s = scheme(3, 2, 1);
        let g = MarginalSpec::geometric(0.5).unwrap();
        assert!(matches!(
            min_joint(&[g.clone(), g.clone()], &s, 1e-9),
            Err(Error::SchemeMismatch { .. })
        ));
        assert!(min_joint(&vec![g.clone(); 3], &s, 0.0).is_err());
        assert!(min_joint(&vec![g.clone(); 3], &s, 0.01).is_err());
        let slow = MarginalSpec::geometric(1e-7).unwrap();
        assert!(matches!(
            min_joint(std::slice::from_ref(&slow), &scheme(1, 1, 0), 1e-12),
            Err(Error::TruncationFailure { .. })
        ));
        let moderate = MarginalSpec::geometric(1e-5).unwrap();
        assert!(matches!(
            min_joint(&[moderate], &scheme(1, 1, 0), 1e-12),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn coarsen_aggregates_mass() {
        let specs = vec![MarginalSpec::poisson(1.1).unwrap(); 3];
        let s = scheme(3, 2, 1);
        let j = min_joint(&specs, &s, 1e-12).unwrap();
        let same = coarsen(&j, |u| u, |v| v);
        assert_eq!(same, j);
        let t = coarsen(&j, |u| (u > 0) as i64, |v| (v > 0) as i64);
        assert!((t.total_mass() - j.total_mass()).abs() < 1e-15);
        let q = -(-1.1f64).exp_m1();
        let table = bernoulli_min_table(&[q; 3], &s).unwrap().cells();
        for u in 0..2 {
            for v in 0..2 {
                assert!((t.prob(u, v) - table[u as usize][v as usize]).abs() < 1e-12);
            }
        }
        let flat = coarsen(&j, |_| 7, |v| v);
        assert_eq!(flat.rows(), 1);
    }

    #[test]
    fn product_of_tables() {
        let a = crate::closed_form::TwoByTwoJoint::new(0.4, 0.1, 0.2, 0.3).unwrap().to_joint();
        let b = crate::closed_form::TwoByTwoJoint::new(0.25, 0.25, 0.1, 0.4).unwrap().to_joint();
        let p = product_joint(&a, &b).unwrap();
        assert_eq!((p.rows(), p.cols()), (4, 4));
        assert!((p.probs()[1][2] - a.probs()[0][1] * b.probs()[1][0]).abs() < 1e-17);
        assert!((p.total_mass() - 1.0).abs() < 1e-15);
        let point = JointPMF::new(vec![5], vec![9], vec![vec![1.0]], 0.0).unwrap();
        let same = product_joint(&a, &point).unwrap();
        assert_eq!(same.probs(), a.probs());
    }

    #[test]
    fn construction_validates() {
        assert!(JointPMF::new(vec![0, 1], vec![0], vec![vec![0.5]], 0.0).is_err());
        assert!(JointPMF::new(vec![1, 0], vec![0], vec![vec![0.5], vec![0.5]], 0.0).is_err());
        assert!(JointPMF::new(vec![0], vec![0], vec![vec![0.5]], 0.0).is_err());
        assert!(JointPMF::new(vec![0], vec![0], vec![vec![-0.5]], 1.5).is_err());
        let pruned = JointPMF::new(
            vec![0, 1, 2],
            vec![0, 1],
            vec![vec![0.5, 0.0], vec![0.0, 0.0], vec![0.25, 0.25]],
            0.0,
        )
        .unwrap();
        assert_eq!(pruned.support_u(), &[0, 2]);
        assert_eq!(pruned.support_v(), &[0, 1]);
    }

    #[test]
    fn csv_and_json_layouts() {
        let j = JointPMF::new(vec![0, 3], vec![1, 2], vec![vec![0.5, 0.25], vec![0.0, 0.25]], 0.0)
            .unwrap();
        assert_eq!(
            j.to_csv_with(|x| x.to_string()),
            "u\\v,1,2\n0,0.5,0.25\n3,0,0.25\n"
        );
        let text = serde_json::to_string(&j).unwrap();
        let back: JointPMF = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["support_u", "support_v", "probs", "truncated_mass"] {
            assert!(v.get(key).is_some());
        }
        assert!(serde_json::from_str::<JointPMF>(
            r#"{"support_u":[0],"support_v":[0],"probs":[[2.0]],"truncated_mass":0}"#
        )
        .is_err());
    }
}
