//! Maximal correlation of an arbitrary finite table, computed two independent ways.
//!
//! For a table `P` with marginals `p_u`, `p_v`, the normalized matrix
//! `Q[u][v] = P[u][v] / sqrt(p_u p_v)` has top singular pair `(sqrt(p_u), sqrt(p_v))`
//! with singular value 1, and its second singular value is the maximal
//! correlation. [`svd_maxcorr`] removes the known top pair and takes the largest
//! remaining singular value; [`ace_maxcorr`] runs alternating conditional
//! expectations, i.e. a Krylov-accelerated power iteration on the centered
//! conditional-expectation operator, and never forms the matrix `Q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint::{coarsen, product_joint, JointPMF};
use crate::svd::svd;
use crate::{MaxCorrResult, Method};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Result of the spectral route, including the optimal score functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub value: f64,
    pub top_singular: f64,
    pub gap: f64,
    /// `(u, phi(u))` with `E[phi(U)] = 0`, `E[phi(U)^2] = 1`.
    pub left_fn: Vec<(i64, f64)>,
    /// `(v, psi(v))` with `E[psi(V)] = 0`, `E[psi(V)^2] = 1`.
    pub right_fn: Vec<(i64, f64)>,
}

impl SpectralReport {
    pub fn to_result(&self, joint: &JointPMF) -> MaxCorrResult {
        MaxCorrResult {
            value: self.value,
            method: Method::SvdOracle,
            error_budget: joint.truncated_mass(),
        }
    }
}

/// Table renormalized to total mass one, with its marginals.
struct Normalized {
    cells: Vec<f64>,
    pu: Vec<f64>,
    pv: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Normalized {
    fn new(joint: &JointPMF) -> Result<Self> {
        let (rows, cols) = (joint.rows(), joint.cols());
        if rows < 2 || cols < 2 {
            return Err(Error::DegenerateMargin(format!(
                "need at least two atoms on each side, table is {rows}x{cols}"
            )));
        }
        let total = joint.total_mass();
        let cells: Vec<f64> = joint.probs().iter().flatten().map(|x| x / total).collect();
        let pu = joint.marginal_u().iter().map(|x| x / total).collect();
        let pv = joint.marginal_v().iter().map(|x| x / total).collect();
        Ok(Self {
            cells,
            pu,
            pv,
            rows,
            cols,
        })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }
}

/// Second singular value of the normalized table via the deflated decomposition.
pub fn svd_maxcorr(joint: &JointPMF) -> Result<SpectralReport> {
    let t = Normalized::new(joint)?;
    let su: Vec<f64> = t.pu.iter().map(|x| x.sqrt()).collect();
    let sv: Vec<f64> = t.pv.iter().map(|x| x.sqrt()).collect();
    let q: Vec<f64> = (0..t.rows * t.cols)
        .map(|x| t.cells[x] / (su[x / t.cols] * sv[x % t.cols]))
        .collect();
    let top_singular = svd(&q, t.rows, t.cols).values[0];

    let deflated: Vec<f64> = (0..t.rows * t.cols)
        .map(|x| q[x] - su[x / t.cols] * sv[x % t.cols])
        .collect();
    let dec = svd(&deflated, t.rows, t.cols);
    let sigma = dec.values[0];
    let (u, v) = (&dec.u[0], &dec.v[0]);

    let mut left: Vec<f64> = u.iter().zip(&su).map(|(x, s)| x / s).collect();
    let mut right: Vec<f64> = v.iter().zip(&sv).map(|(x, s)| x / s).collect();
    // Orient so the left function is positively correlated with the identity.
    let trend: f64 = joint
        .support_u()
        .iter()
        .zip(&left)
        .zip(&t.pu)
        .map(|((&x, &f), &w)| x as f64 * f * w)
        .sum();
    if trend < 0.0 {
        left.iter_mut().for_each(|x| *x = -*x);
        right.iter_mut().for_each(|x| *x = -*x);
    }

    let value = sigma.clamp(0.0, 1.0).min(top_singular);
    Ok(SpectralReport {
        value,
        top_singular,
        gap: (top_singular - value).max(0.0),
        left_fn: joint.support_u().iter().copied().zip(left).collect(),
        right_fn: joint.support_v().iter().copied().zip(right).collect(),
    })
}

/// [`svd_maxcorr`] packaged as a [`MaxCorrResult`]; the error budget is the cut tail mass.
pub fn svd_result(joint: &JointPMF) -> Result<MaxCorrResult> {
    Ok(svd_maxcorr(joint)?.to_result(joint))
}

/// Centers `f` under weights `w` and scales it to unit second moment; returns the norm before scaling.
fn standardize(f: &mut [f64], w: &[f64]) -> f64 {
    let mean: f64 = f.iter().zip(w).map(|(x, p)| x * p).sum();
    f.iter_mut().for_each(|x| *x -= mean);
    let norm = f.iter().zip(w).map(|(x, p)| x * x * p).sum::<f64>().sqrt();
    if norm > 0.0 {
        f.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

// Below this the seed has no component outside the operator's kernel.
const STALL: f64 = 1e-12;

fn seeds(rows: usize) -> Vec<Vec<f64>> {
    let half: Vec<f64> = (0..rows).map(|i| (2 * i >= rows) as u8 as f64).collect();
    let quartile: Vec<f64> = (0..rows).map(|i| (4 * i >= 3 * rows) as u8 as f64).collect();
    let ramp: Vec<f64> = (0..rows).map(|i| i as f64).collect();
    let alternating: Vec<f64> = (0..rows).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    vec![half, quartile, ramp, alternating]
}

fn weighted_dot(f: &[f64], g: &[f64], w: &[f64]) -> f64 {
    f.iter().zip(g).zip(w).map(|((a, b), p)| a * b * p).sum()
}

/// One alternating sweep `phi -> E[E[phi(U) | V] | U]`, centered under the `U` marginal.
fn ace_sweep(t: &Normalized, phi: &[f64], psi: &mut [f64], out: &mut [f64]) {
    for (j, y) in psi.iter_mut().enumerate() {
        *y = (0..t.rows).map(|i| t.at(i, j) * phi[i]).sum::<f64>() / t.pv[j];
    }
    let mean_v: f64 = psi.iter().zip(&t.pv).map(|(y, p)| y * p).sum();
    psi.iter_mut().for_each(|y| *y -= mean_v);
    for (i, x) in out.iter_mut().enumerate() {
        *x = (0..t.cols).map(|j| t.at(i, j) * psi[j]).sum::<f64>() / t.pu[i];
    }
    let mean_u: f64 = out.iter().zip(&t.pu).map(|(x, p)| x * p).sum();
    out.iter_mut().for_each(|x| *x -= mean_u);
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `a`
/// and off-diagonal `b`, by Sturm-sequence bisection.
fn tridiagonal_top(a: &[f64], b: &[f64]) -> f64 {
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for (i, &ai) in a.iter().enumerate() {
            let off = if i == 0 { 0.0 } else { b[i - 1] * b[i - 1] };
            d = ai - x - if off == 0.0 { 0.0 } else { off / d };
            if d == 0.0 {
                d = f64::MIN_POSITIVE;
            }
            count += usize::from(d < 0.0);
        }
        count
    };
    let radius = |i: usize| {
        let left = if i == 0 { 0.0 } else { b[i - 1].abs() };
        let right = b.get(i).map_or(0.0, |x| x.abs());
        left + right
    };
    let mut hi = (0..a.len()).map(|i| a[i] + radius(i)).fold(f64::MIN, f64::max);
    let mut lo = (0..a.len()).map(|i| a[i] - radius(i)).fold(f64::MAX, f64::min);
    while hi - lo > f64::EPSILON * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) == a.len() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Solves `(T - shift I) x = rhs` for the tridiagonal `T` (diagonal `a`,
/// off-diagonal `b`) by Gaussian elimination with partial pivoting.
fn tridiagonal_solve(a: &[f64], b: &[f64], shift: f64, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = a.len();
    let mut d: Vec<f64> = a.iter().map(|x| x - shift).collect();
    let mut du = b.to_vec();
    let mut dl = b.to_vec();
    let tiny = f64::EPSILON * a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
            dl[i] = 0.0;
        } else {
            // swap rows i and i + 1; dl[i] becomes the second superdiagonal
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let temp = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = temp - fact * rhs[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut x = rhs[i];
        if i + 1 < n {
            x -= du[i] * rhs[i + 1];
        }
        if i + 2 < n {
            x -= dl[i] * rhs[i + 2];
        }
        rhs[i] = x / d[i];
    }
    rhs
}

/// Last component of the unit eigenvector of the tridiagonal for eigenvalue `theta`.
fn ritz_last_component(a: &[f64], b: &[f64], theta: f64) -> f64 {
    let mut y = vec![1.0; a.len()];
    for _ in 0..3 {
        y = tridiagonal_solve(a, b, theta, y);
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return 1.0;
        }
        y.iter_mut().for_each(|x| *x /= norm);
    }
    y[a.len() - 1]
}

/// Top eigenvalue of the operator compressed to `basis`, from the stored images
/// `M q_j`. Used once the basis is complete, where rounding has left small
/// couplings outside the tridiagonal band.
fn projected_top(basis: &[Vec<f64>], images: &[Vec<f64>], w: &[f64]) -> f64 {
    let k = basis.len();
    let mut h = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            h[i * k + j] = weighted_dot(&basis[i], &images[j], w);
        }
    }
    for i in 0..k {
        for j in 0..i {
            let avg = 0.5 * (h[i * k + j] + h[j * k + i]);
            h[i * k + j] = avg;
            h[j * k + i] = avg;
        }
    }
    // positive semidefinite, so singular values are the eigenvalues
    svd(&h, k, k).values[0]
}

/// Alternating conditional expectations with Rayleigh-Ritz extraction.
///
/// Each step is one ACE sweep `phi <- E[psi(V) | U]`, `psi <- E[phi(U) | V]`
/// on centered functions. Instead of keeping only the latest iterate, the value
/// is read off the span of all iterates (a Lanczos recurrence, fully
/// reorthogonalized), which matches plain power iteration when the spectrum is
/// well separated and still converges when the second and third singular
/// values nearly coincide. It stops once the Ritz residual falls below `tol`
/// relative to the current value. The span has dimension at most `min(rows - 1, cols)`,
/// so the recurrence always terminates.
///
/// Seeds: the centered indicator of the upper half of the `U` support, then the
/// top quartile, a ramp and an alternating sign pattern. Every seed that is not
/// annihilated is run and the largest value kept; if all are annihilated the
/// table is treated as independent. The error budget is the last change in
/// the value.
pub fn ace_maxcorr(joint: &JointPMF, tol: f64, max_iter: usize) -> Result<MaxCorrResult> {
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidConfig(format!(
            "ace needs tol > 0 and max_iter > 0, got tol={tol}, max_iter={max_iter}"
        )));
    }
    let t = Normalized::new(joint)?;
    // centered functions of U, and at most rank + 1 Krylov directions
    let dim = (t.rows - 1).min(t.cols);
    let mut best: Option<MaxCorrResult> = None;

    for mut seed in seeds(t.rows) {
        if standardize(&mut seed, &t.pu) <= STALL {
            continue;
        }
        let mut basis = vec![seed];
        let mut images: Vec<Vec<f64>> = Vec::new();
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut psi = vec![0.0; t.cols];
        let mut w = vec![0.0; t.rows];
        let mut value = 0.0;
        let mut delta = f64::INFINITY;
        let mut done = false;
        for iter in 1..=max_iter {
            let q = basis.last().unwrap();
            ace_sweep(&t, q, &mut psi, &mut w);
            images.push(w.clone());
            let a = weighted_dot(q, &w, &t.pu);
            if iter == 1 && a <= STALL * STALL {
                // seed annihilated
                done = true;
                value = f64::NAN;
                break;
            }
            alpha.push(a);
            // two passes of Gram-Schmidt against the constant and the whole basis
            for _ in 0..2 {
                let mean: f64 = w.iter().zip(&t.pu).map(|(x, p)| x * p).sum();
                w.iter_mut().for_each(|x| *x -= mean);
                for b in &basis {
                    let c = weighted_dot(b, &w, &t.pu);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = weighted_dot(&w, &w, &t.pu).sqrt();
            let exhausted = basis.len() >= dim || norm <= 1e-13 * alpha[0].max(1e-300).sqrt();
            let theta = if exhausted {
                projected_top(&basis, &images, &t.pu)
            } else {
                tridiagonal_top(&alpha, &beta)
            };
            let next = theta.max(0.0).sqrt().min(1.0);
            delta = (next - value).abs();
            value = next;
            // norm of M x - theta x for the Ritz vector x
            let residual = norm * ritz_last_component(&alpha, &beta, theta).abs();
            if exhausted || residual <= tol * theta.max(tol) {
                done = true;
                break;
            }
            beta.push(norm);
            basis.push(w.iter().map(|x| x / norm).collect());
        }
        let result = MaxCorrResult {
            value,
            method: Method::AceOracle,
            error_budget: if delta.is_finite() { delta } else { 0.0 },
        };
        if !done {
            return Err(Error::NoConvergence {
                last: result,
                iterations: max_iter,
            });
        }
        if !value.is_nan() && best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(result);
        }
    }
    Ok(best.unwrap_or(MaxCorrResult {
        value: 0.0,
        method: Method::AceOracle,
        error_budget: 0.0,
    }))
}

/// Maximal correlation of the independent product of `joints` (lhs) and the
/// largest individual coefficient (rhs). The two agree for independent pairs.
pub fn csaki_fischer_check(joints: &[JointPMF]) -> Result<(f64, f64)> {
    if !(2..=4).contains(&joints.len()) {
        return Err(Error::InvalidConfig(format!(
            "expected 2 to 4 tables, got {}",
            joints.len()
        )));
    }
    let mut product = joints[0].clone();
    for j in &joints[1..] {
        product = product_joint(&product, j)?;
    }
    let lhs = svd_maxcorr(&product)?.value;
    let mut rhs = 0.0f64;
    for j in joints {
        rhs = rhs.max(svd_maxcorr(j)?.value);
    }
    Ok((lhs, rhs))
}

/// Coefficients after (`coarse`) and before (`fine`) applying `u_map`, `v_map`.
pub fn data_processing_check(
    joint: &JointPMF,
    u_map: impl Fn(i64) -> i64,
    v_map: impl Fn(i64) -> i64,
) -> Result<(f64, f64)> {
    let coarse = svd_maxcorr(&coarsen(joint, u_map, v_map))?.value;
    let fine = svd_maxcorr(joint)?.value;
    Ok((coarse, fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{bernoulli_min_table, r_bernoulli, r_geometric, TwoByTwoJoint};
    use crate::joint::min_joint;
    use crate::marginal::MarginalSpec;
    use crate::scheme::OverlapScheme;
    use proptest::prelude::*;

    fn s321() -> OverlapScheme {
        OverlapScheme::new(3, 2, 1).unwrap()
    }

    fn independent(pu: &[f64], pv: &[f64]) -> JointPMF {
        JointPMF::new(
            (0..pu.len() as i64).collect(),
            (0..pv.len() as i64).collect(),
            pu.iter().map(|a| pv.iter().map(|b| a * b).collect()).collect(),
            0.0,
        )
        .unwrap()
    }

    fn diagonal(w: &[f64]) -> JointPMF {
        let k = w.len();
        JointPMF::new(
            (0..k as i64).collect(),
            (0..k as i64).collect(),
            (0..k).map(|i| (0..k).map(|j| if i == j { w[i] } else { 0.0 }).collect()).collect(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn spectral_examples() {
        let t = bernoulli_min_table(&[0.5; 3], &s321()).unwrap().to_joint();
        let r = svd_maxcorr(&t).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.top_singular - 1.0).abs() < 1e-10);
        assert!((r.gap - 2.0 / 3.0).abs() < 1e-12);
        assert!(svd_maxcorr(&independent(&[0.2, 0.5, 0.3], &[0.6, 0.4])).unwrap().value < 1e-12);
        assert!((svd_maxcorr(&diagonal(&[0.1, 0.2, 0.3, 0.4])).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn score_functions_attain_the_value() {
        let ps = [0.9, 0.8, 0.7];
        let j = bernoulli_min_table(&ps, &s321()).unwrap().to_joint();
        let r = svd_maxcorr(&j).unwrap();
        let mut corr = 0.0;
        for (i, &(u, f)) in r.left_fn.iter().enumerate() {
            assert_eq!(u, j.support_u()[i]);
            for (jj, &(_, g)) in r.right_fn.iter().enumerate() {
                corr += j.probs()[i][jj] * f * g;
            }
        }
        assert!((corr - r.value).abs() < 1e-12);
        assert!((r.value - r_bernoulli(&ps, &s321()).unwrap().value).abs() < 1e-12);
        // increasing in u after orientation
        assert!(r.left_fn[1].1 > r.left_fn[0].1);
    }

    #[test]
    fn degenerate_margins_rejected() {
        let one_row = JointPMF::new(vec![0], vec![0, 1], vec![vec![0.5, 0.5]], 0.0).unwrap();
        assert!(matches!(svd_maxcorr(&one_row), Err(Error::DegenerateMargin(_))));
        assert!(matches!(
            ace_maxcorr(&one_row.transpose(), 1e-12, 10),
            Err(Error::DegenerateMargin(_))
        ));
    }

    #[test]
    fn ace_examples() {
        let ps = [0.9, 0.8, 0.7];
        let j = bernoulli_min_table(&ps, &s321()).unwrap().to_joint();
        let a = ace_maxcorr(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(a.method, Method::AceOracle);
        assert!((a.value - svd_maxcorr(&j).unwrap().value).abs() < 1e-9);
        assert!((a.value - 0.452_267_016_866_645_4).abs() < 1e-9);

        let ind = independent(&[0.2, 0.5, 0.3], &[0.6, 0.4]);
        assert!(ace_maxcorr(&ind, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().value < 1e-12);

        let specs = vec![MarginalSpec::geometric(0.5).unwrap(); 3];
        let g = min_joint(&specs, &s321(), 1e-12).unwrap();
        let a = ace_maxcorr(&g, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let want = r_geometric(&[0.5; 3], &s321()).unwrap().value;
        assert!((a.value - want).abs() < 1e-8);
    }

    #[test]
    fn ace_restarts_when_seed_is_annihilated() {
        // Only the parity of U carries information, so the upper-half indicator of
        // a 4-atom support has no component along the second singular function.
        let cells = vec![
            vec![0.15, 0.10],
            vec![0.10, 0.15],
            vec![0.15, 0.10],
            vec![0.10, 0.15],
        ];
        let j = JointPMF::new(vec![0, 1, 2, 3], vec![0, 1], cells, 0.0).unwrap();
        let svd = svd_maxcorr(&j).unwrap().value;
        assert!((svd - 0.2).abs() < 1e-12);
        let ace = ace_maxcorr(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((ace.value - svd).abs() < 1e-9);
    }

    #[test]
    fn ace_resolves_clustered_spectrum() {
        // the second and third singular values differ by about 1e-8 and the
        // optimal function lives on an atom of mass ~1e-9
        let s = OverlapScheme::new(2, 1, 0).unwrap();
        let specs = vec![MarginalSpec::binomial(16, 0.7).unwrap(); 2];
        let j = min_joint(&specs, &s, 1e-12).unwrap();
        let svd = svd_maxcorr(&j).unwrap().value;
        let ace = ace_maxcorr(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().value;
        assert!((svd - ace).abs() < 1e-9, "{svd} vs {ace}");
    }

    #[test]
    fn tridiagonal_helpers() {
        // eigenvalues of [[2, 1], [1, 2]] are 1 and 3
        assert!((tridiagonal_top(&[2.0, 2.0], &[1.0]) - 3.0).abs() < 1e-14);
        let y = ritz_last_component(&[2.0, 2.0], &[1.0], 3.0);
        assert!((y.abs() - 0.5f64.sqrt()).abs() < 1e-12);
        let x = tridiagonal_solve(&[4.0, 1.0, 3.0], &[1.0, 5.0], 0.0, vec![5.0, 7.0, 8.0]);
        for (got, want) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn ace_reports_non_convergence() {
        let specs = vec![MarginalSpec::poisson(2.0).unwrap(); 3];
        let big = min_joint(&specs, &s321(), 1e-12).unwrap();
        match ace_maxcorr(&big, 1e-300, 3) {
            Err(Error::NoConvergence { last, iterations }) => {
                assert_eq!(iterations, 3);
                assert!(last.value > 0.0 && last.value <= 1.0);
                assert!(last.error_budget > 0.0);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
        assert!(ace_maxcorr(&big, 0.0, 10).is_err());
        assert!(ace_maxcorr(&big, 1e-12, 0).is_err());
    }

    #[test]
    fn csaki_fischer_examples() {
        let third = bernoulli_min_table(&[0.5; 3], &s321()).unwrap().to_joint();
        let (l, r) = csaki_fischer_check(&[third.clone(), third.clone()]).unwrap();
        assert!((l - 1.0 / 3.0).abs() < 1e-12 && (r - 1.0 / 3.0).abs() < 1e-12);
        let ind = independent(&[0.3, 0.7], &[0.5, 0.25, 0.25]);
        let (l, r) = csaki_fischer_check(&[third.clone(), ind]).unwrap();
        assert!((l - r).abs() < 1e-12 && (r - 1.0 / 3.0).abs() < 1e-12);
        let d = diagonal(&[0.5, 0.5]);
        let (l, r) = csaki_fischer_check(&[d.clone(), d]).unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        assert!(csaki_fischer_check(std::slice::from_ref(&third)).is_err());
        assert!(csaki_fischer_check(&vec![third; 5]).is_err());
    }

    #[test]
    fn data_processing_examples() {
        let specs = vec![MarginalSpec::poisson(1.7).unwrap(); 3];
        let j = min_joint(&specs, &s321(), 1e-12).unwrap();
        let (c, f) = data_processing_check(&j, |u| u, |v| v).unwrap();
        assert_eq!(c, f);
        let (c, f) = data_processing_check(&j, |u| (u > 0) as i64, |v| (v > 0) as i64).unwrap();
        let target = crate::closed_form::r_ml(-(-1.7f64).exp_m1(), &s321()).unwrap();
        assert!((c - target).abs() < 1e-10);
        assert!((f - target).abs() < 1e-8);
        let (c, f) = data_processing_check(&j, |u| (u >= 2) as i64, |v| v.min(3)).unwrap();
        assert!(c <= f + 1e-10);
        assert!(matches!(
            data_processing_check(&j, |_| 0, |v| v),
            Err(Error::DegenerateMargin(_))
        ));
    }

    #[test]
    fn two_by_two_formula_against_spectral() {
        let j = TwoByTwoJoint::new(0.1, 0.3, 0.45, 0.15).unwrap();
        let formula = crate::closed_form::r_two_by_two(&j);
        assert!((svd_maxcorr(&j.to_joint()).unwrap().value - formula).abs() < 1e-13);
    }

    fn random_table(rows: usize, cols: usize, seed: u64) -> JointPMF {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random::<f64>() + 1e-3).collect())
            .collect();
        let total: f64 = raw.iter().flatten().sum();
        JointPMF::new(
            (0..rows as i64).collect(),
            (0..cols as i64).collect(),
            raw.into_iter().map(|r| r.into_iter().map(|x| x / total).collect()).collect(),
            0.0,
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn top_pair_is_the_constant_function(rows in 2usize..12, cols in 2usize..12, seed in any::<u64>()) {
            let j = random_table(rows, cols, seed);
            let r = svd_maxcorr(&j).unwrap();
            prop_assert!((r.top_singular - 1.0).abs() < 1e-10);
            prop_assert!(r.value <= r.top_singular);
            // Q sqrt(p_v) = sqrt(p_u)
            let pu = j.marginal_u();
            let pv = j.marginal_v();
            for (row, &p) in j.probs().iter().zip(&pu) {
                let lhs: f64 = row.iter().zip(&pv).map(|(c, &q)| c / (p * q).sqrt() * q.sqrt()).sum();
                prop_assert!((lhs - p.sqrt()).abs() < 1e-12);
            }
        }

        #[test]
        fn invariant_under_relabeling_and_transpose(rows in 2usize..9, cols in 2usize..9, seed in any::<u64>(), shift in -50i64..50) {
            let j = random_table(rows, cols, seed);
            let base = svd_maxcorr(&j).unwrap().value;
            // strictly monotone relabeling
            let relabeled = JointPMF::new(
                j.support_u().iter().map(|u| 3 * u * u + shift).collect(),
                j.support_v().iter().map(|v| 7 * v - 2).collect(),
                j.probs().to_vec(),
                0.0,
            ).unwrap();
            prop_assert!((svd_maxcorr(&relabeled).unwrap().value - base).abs() < 1e-12);
            // row permutation (reverse) keeps the mass pattern
            let mut rev = j.probs().to_vec();
            rev.reverse();
            let permuted = JointPMF::new(j.support_u().to_vec(), j.support_v().to_vec(), rev, 0.0).unwrap();
            prop_assert!((svd_maxcorr(&permuted).unwrap().value - base).abs() < 1e-12);
            prop_assert!((svd_maxcorr(&j.transpose()).unwrap().value - base).abs() < 1e-12);
        }

        #[test]
        fn rank_one_tables_have_zero_coefficient(
            pu in proptest::collection::vec(0.01f64..1.0, 2..10),
            pv in proptest::collection::vec(0.01f64..1.0, 2..10),
        ) {
            let su: f64 = pu.iter().sum();
            let sv: f64 = pv.iter().sum();
            let pu: Vec<f64> = pu.iter().map(|x| x / su).collect();
            let pv: Vec<f64> = pv.iter().map(|x| x / sv).collect();
            let j = independent(&pu, &pv);
            prop_assert!(svd_maxcorr(&j).unwrap().value < 1e-12);
            prop_assert!(ace_maxcorr(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().value < 1e-12);
        }

        #[test]
        fn ace_agrees_with_svd(rows in 2usize..30, cols in 2usize..30, seed in any::<u64>()) {
            let j = random_table(rows, cols, seed);
            let a = ace_maxcorr(&j, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().value;
            let s = svd_maxcorr(&j).unwrap().value;
            prop_assert!((a - s).abs() < 1e-9, "ace {} svd {}", a, s);
            prop_assert!(s > 0.0);
        }
    }
}
