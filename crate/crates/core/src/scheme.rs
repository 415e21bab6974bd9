use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two overlapping blocks of `n` independent variables: `{1..m}` and `{ell+1..n}`.
///
/// The blocks share the indices `{ell+1..m}`, so the overlap is never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OverlapScheme {
    n: usize,
    m: usize,
    ell: usize,
}

impl OverlapScheme {
    pub fn new(n: usize, m: usize, ell: usize) -> Result<Self> {
        validate_scheme(n as i64, m as i64, ell as i64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of shared variables, `m - ell`.
    pub fn overlap(&self) -> usize {
        self.m - self.ell
    }

    /// Size of the first block, `m`.
    pub fn block1(&self) -> usize {
        self.m
    }

    /// Size of the second block, `n - ell`.
    pub fn block2(&self) -> usize {
        self.n - self.ell
    }

    /// Zero-based index ranges of the variables only in block 1, in both, and only in block 2.
    pub(crate) fn partition(&self) -> [std::ops::Range<usize>; 3] {
        [0..self.ell, self.ell..self.m, self.m..self.n]
    }

    /// Every valid scheme with `n <= max_n`, ordered by `(n, m, ell)`.
    pub fn all_up_to(max_n: usize) -> Vec<OverlapScheme> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            for m in 1..=n {
                for ell in 0..m {
                    out.push(OverlapScheme { n, m, ell });
                }
            }
        }
        out
    }
}

impl std::fmt::Display for OverlapScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.n, self.m, self.ell)
    }
}

impl std::str::FromStr for OverlapScheme {
    type Err = Error;

    /// Parses `n,m,l`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let parse = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| Error::InvalidConfig(format!("scheme must be `n,m,l` integers, got `{s}`")))
        };
        match parts.as_slice() {
            [n, m, l] => validate_scheme(parse(n)?, parse(m)?, parse(l)?),
            _ => Err(Error::InvalidConfig(format!(
                "scheme must be `n,m,l` integers, got `{s}`"
            ))),
        }
    }
}

/// Checks `1 <= ell + 1 <= m <= n` on raw integers.
pub fn validate_scheme(n: i64, m: i64, ell: i64) -> Result<OverlapScheme> {
    if ell >= 0 && ell < m && m <= n {
        Ok(OverlapScheme {
            n: n as usize,
            m: m as usize,
            ell: ell as usize,
        })
    } else {
        Err(Error::SchemeInvalid { n, m, ell })
    }
}
