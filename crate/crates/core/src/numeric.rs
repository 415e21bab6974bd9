//! Small floating-point helpers shared by the closed forms and the table builders.

use std::f64::consts::PI;

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// `1 - exp(x)` for `x <= 0`, accurate when `x` is close to zero.
pub fn one_minus_exp(x: f64) -> f64 {
    -x.exp_m1()
}

/// `ln(1 - exp(x))` for `x < 0`.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// Error of Stirling's approximation: `ln(n!) - ln(sqrt(2 pi n) (n/e)^n)`.
fn stirling_error(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        libm::lgamma(n + 1.0) - (n + 0.5) * n.ln() + n - 0.5 * (2.0 * PI).ln()
    } else {
        let nn = n * n;
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np - x`, stable when `x ~ np`.
fn deviance(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// Binomial(d, p) mass at `k` via the saddle-point expansion (relative accuracy ~1e-15).
pub fn binomial_pmf(d: u64, p: f64, k: u64) -> f64 {
    if k > d {
        return 0.0;
    }
    let q = 1.0 - p;
    let df = d as f64;
    if k == 0 {
        return (df * (-p).ln_1p()).exp();
    }
    if k == d {
        return (df * p.ln()).exp();
    }
    let kf = k as f64;
    let lc = stirling_error(df)
        - stirling_error(kf)
        - stirling_error(df - kf)
        - deviance(kf, df * p)
        - deviance(df - kf, df * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / df).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// Poisson(rate) mass at `k` via the saddle-point expansion.
pub fn poisson_pmf(rate: f64, k: u64) -> f64 {
    if k == 0 {
        return (-rate).exp();
    }
    let kf = k as f64;
    (-stirling_error(kf) - deviance(kf, rate)).exp() / (2.0 * PI * kf).sqrt()
}
