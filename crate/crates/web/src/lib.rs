//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Each export is a thin wrapper over a plain function so the logic can be
//! tested natively.

use maxcorr::closed_form::{r_geometric, r_marshall_olkin, r_ml, r_ml_limits};
use maxcorr::family::{verify, Family};
use maxcorr::OverlapScheme;
use wasm_bindgen::prelude::*;

const TAIL_EPS: f64 = 1e-12;
const ACE_TOL: f64 = 1e-12;
const ACE_MAX_ITER: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Core(#[from] maxcorr::Error),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, DemoError>;

fn js(e: impl Into<DemoError>) -> JsError {
    JsError::new(&e.into().to_string())
}

/// `R_{m,l}(p)` on `points` evenly spaced values of `p` in `[0, 1]`, endpoints
/// taken from the limits.
pub fn curve(scheme: &OverlapScheme, points: usize) -> Result<Vec<f64>> {
    let points = points.max(2);
    let (at_zero, at_one) = r_ml_limits(scheme);
    (0..points)
        .map(|i| match i {
            0 => Ok(at_zero),
            i if i == points - 1 => Ok(at_one),
            i => Ok(r_ml(i as f64 / (points - 1) as f64, scheme)?),
        })
        .collect()
}

/// Parses the demo's family name and flat parameter list.
///
/// Bernoulli and geometric take one probability per variable (a single value is
/// shared), binomial takes `[trials, p]` and Poisson `[rate]`.
pub fn family_from(name: &str, params: &[f64], n: usize) -> Result<Family> {
    let probs = || {
        if params.len() == 1 {
            vec![params[0]; n]
        } else {
            params.to_vec()
        }
    };
    let bad = |want: &str| DemoError::Input(format!("{name} expects {want}, got {} values", params.len()));
    match name {
        "bernoulli" => Ok(Family::Bernoulli { ps: probs() }),
        "geometric" => Ok(Family::Geometric { ps: probs() }),
        "binomial" => match *params {
            [d, p] if d >= 1.0 && d.fract() == 0.0 => Ok(Family::Binomial { trials: d as u64, p }),
            _ => Err(bad("[trials, p] with integer trials")),
        },
        "poisson" => match *params {
            [rate] => Ok(Family::Poisson { rate }),
            _ => Err(bad("[rate]")),
        },
        other => Err(DemoError::Input(format!("unknown family {other}"))),
    }
}

/// Closed form, both oracles and the spectral score functions as one JSON object.
pub fn verification_json(name: &str, params: &[f64], scheme: &OverlapScheme) -> Result<String> {
    let family = family_from(name, params, scheme.n())?;
    let v = verify(&family, scheme, TAIL_EPS, ACE_TOL, ACE_MAX_ITER)?;
    let mut obj = serde_json::to_value(&v).expect("verification serializes");
    obj["passed"] = v.passed().into();
    obj["tolerance"] = v.tolerance().into();
    Ok(obj.to_string())
}

/// `[discretized, limit]`: the geometric coefficient on a grid of width `h`
/// against the Marshall-Olkin value it approaches.
pub fn mo_pair(rates: [f64; 3], h: f64) -> Result<[f64; 2]> {
    if h.is_nan() || h <= 0.0 {
        return Err(DemoError::Input(format!("grid width must be positive, got {h}")));
    }
    let limit = r_marshall_olkin(rates[0], rates[1], rates[2])?;
    let ps: Vec<f64> = rates.iter().map(|l| -(-l * h).exp_m1()).collect();
    let discrete = r_geometric(&ps, &OverlapScheme::new(3, 2, 1)?)?.value;
    Ok([discrete, limit])
}

#[wasm_bindgen]
pub fn rml_curve(n: usize, m: usize, l: usize, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    let scheme = OverlapScheme::new(n, m, l).map_err(js)?;
    curve(&scheme, points).map_err(js)
}

#[wasm_bindgen]
pub fn verify_family(
    family: &str,
    params: Vec<f64>,
    n: usize,
    m: usize,
    l: usize,
) -> std::result::Result<String, JsError> {
    let scheme = OverlapScheme::new(n, m, l).map_err(js)?;
    verification_json(family, &params, &scheme).map_err(js)
}

#[wasm_bindgen]
pub fn marshall_olkin_limit(l1: f64, l2: f64, l3: f64, h: f64) -> std::result::Result<Vec<f64>, JsError> {
    mo_pair([l1, l2, l3], h).map(Vec::from).map_err(js)
}
