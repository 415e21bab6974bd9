//! Parsing of comma lists and ranges on the command line.
//!
//! Accepted forms:
//! - `0.1,0.5,0.9` plain list;
//! - `10,100,...,1e6` where `...` continues the progression set by the two
//!   preceding values up to the next one (geometric when that lands exactly,
//!   otherwise arithmetic);
//! - `1e-1..1e-4` decades from the first bound to the second.

use crate::CliError;

const FIT_TOL: f64 = 1e-9;

pub fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: String| CliError::Usage(format!("--{flag} `{s}`: {why}"));
    let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
    if tokens.len() == 1 {
        if let Some((a, b)) = tokens[0].split_once("..") {
            let a = number(a).ok_or_else(|| bad(format!("bad range start `{a}`")))?;
            let b = number(b).ok_or_else(|| bad(format!("bad range end `{b}`")))?;
            return decades(a, b).ok_or_else(|| bad("range bounds must be positive and a power of ten apart".into()));
        }
    }
    let mut out: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        if t == "..." || t == "\u{2026}" {
            let next = tokens
                .get(i + 1)
                .and_then(|t| number(t))
                .ok_or_else(|| bad("`...` needs a number after it".into()))?;
            let [a, b] = match out.as_slice() {
                [.., a, b] => [*a, *b],
                _ => return Err(bad("`...` needs two numbers before it".into())),
            };
            out.extend(progression(a, b, next).ok_or_else(|| bad(format!("no progression from {a}, {b} reaches {next}")))?);
            i += 2;
            continue;
        }
        out.push(number(t).ok_or_else(|| bad(format!("`{t}` is not a number")))?);
        i += 1;
    }
    if out.is_empty() {
        return Err(bad("empty list".into()));
    }
    Ok(out)
}

/// Like [`parse_list`] but every entry must be a non-negative integer.
pub fn parse_counts(flag: &str, s: &str) -> Result<Vec<u64>, CliError> {
    parse_list(flag, s)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 {
                Ok(x as u64)
            } else {
                Err(CliError::Usage(format!("--{flag}: {x} is not a non-negative integer")))
            }
        })
        .collect()
}

fn number(t: &str) -> Option<f64> {
    t.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Removes the representation noise left by repeated multiplication.
fn clean(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn decades(a: f64, b: f64) -> Option<Vec<f64>> {
    if !(a > 0.0 && b > 0.0) {
        return None;
    }
    let steps = (b / a).log10();
    if (steps - steps.round()).abs() > FIT_TOL {
        return None;
    }
    let steps = steps.round() as i32;
    let sign = steps.signum();
    Some((0..=steps.abs()).map(|k| clean(a * 10f64.powi(sign * k))).collect())
}

/// Terms strictly after `b` up to and including `end`.
fn progression(a: f64, b: f64, end: f64) -> Option<Vec<f64>> {
    if a > 0.0 && b > 0.0 && end > 0.0 && a != b {
        let ratio = b / a;
        let count = (end / b).ln() / ratio.ln();
        if count >= 1.0 - FIT_TOL && (count - count.round()).abs() < FIT_TOL {
            return Some((1..=count.round() as i32).map(|k| clean(b * ratio.powi(k))).collect());
        }
    }
    let step = b - a;
    if step == 0.0 {
        return None;
    }
    let count = (end - b) / step;
    if count >= 1.0 - FIT_TOL && (count - count.round()).abs() < FIT_TOL {
        return Some((1..=count.round() as i64).map(|k| clean(b + step * k as f64)).collect());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_ellipsis_lists() {
        assert_eq!(parse_list("p", "0.5, 0.25,0.1").unwrap(), vec![0.5, 0.25, 0.1]);
        assert_eq!(
            parse_list("k", "10,100,...,1e6").unwrap(),
            vec![10.0, 100.0, 1e3, 1e4, 1e5, 1e6]
        );
        assert_eq!(parse_list("k", "1,2,...,5").unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(parse_list("k", "1,2,...,8,20").unwrap(), vec![1.0, 2.0, 4.0, 8.0, 20.0]);
    }

    #[test]
    fn decade_ranges() {
        assert_eq!(parse_list("h", "1e-1..1e-4").unwrap(), vec![0.1, 0.01, 1e-3, 1e-4]);
        assert_eq!(parse_list("h", "1..100").unwrap(), vec![1.0, 10.0, 100.0]);
        assert!(parse_list("h", "1..50").is_err());
        assert!(parse_list("h", "0..1").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_list("p", "").is_err());
        assert!(parse_list("p", "0.1,x").is_err());
        assert!(parse_list("k", "...,3").is_err());
        assert!(parse_list("k", "1,2,...,4.5").is_err());
        assert!(parse_counts("k", "1.5").is_err());
        assert_eq!(parse_counts("k", "10,100").unwrap(), vec![10, 100]);
    }
}
