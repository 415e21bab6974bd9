//! Number formatting and output encodings.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// `x` with `digits` significant digits and trailing zeros removed.
///
/// Magnitudes below `1e-5`, or too large to show in `digits` digits, switch
/// to exponent notation.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

/// `x` rounded to `digits` significant digits, for JSON output.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    sig(x, digits).parse().unwrap_or(x)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Left-aligned `key: value` block.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 1;
    pairs
        .iter()
        .map(|(k, v)| format!("{:<width$} {v}\n", format!("{k}:")))
        .collect()
}

/// Quotes a CSV field when it contains a separator.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(1.0 / 3.0, 10), "0.3333333333");
        assert_eq!(sig(0.5, 10), "0.5");
        assert_eq!(sig(2.0 / 15f64.sqrt(), 4), "0.5164");
        assert_eq!(sig(123456.0, 3), "1.23e5");
        assert_eq!(sig(123456.0, 10), "123456");
        assert_eq!(sig(1.5e-9, 10), "1.5e-9");
        assert_eq!(sig(-2.5e20, 2), "-2.5e20");
        assert_eq!(sig(0.0, 10), "0");
        assert_eq!(sig(1.0, 10), "1");
        assert_eq!(sig(f64::NAN, 3), "NaN");
        assert_eq!(round_sig(1.0 / 3.0, 3), 0.333);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("3,2,1"), "\"3,2,1\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
