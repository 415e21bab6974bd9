//! Dense singular value decomposition by one-sided Jacobi rotations.
//!
//! Plane rotations are applied to column pairs until every pair is
//! numerically orthogonal; the column norms are then the singular values.
//! This is slower than bidiagonalization but computes small singular values
//! to high relative accuracy and has no failure modes on rank-deficient input.

const MAX_SWEEPS: usize = 80;

/// Thin decomposition `A = sum_k values[k] * u[k] v[k]^T`, values in descending order.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub values: Vec<f64>,
    /// Left singular vectors, each of length `rows`.
    pub u: Vec<Vec<f64>>,
    /// Right singular vectors, each of length `cols`.
    pub v: Vec<Vec<f64>>,
}

/// Decomposes the row-major `rows x cols` matrix `a`.
pub(crate) fn svd(a: &[f64], rows: usize, cols: usize) -> Svd {
    assert_eq!(a.len(), rows * cols, "matrix buffer does not match shape");
    if rows < cols {
        let mut t = vec![0.0; a.len()];
        for i in 0..rows {
            for j in 0..cols {
                t[j * rows + i] = a[i * cols + j];
            }
        }
        let s = svd(&t, cols, rows);
        return Svd {
            values: s.values,
            u: s.v,
            v: s.u,
        };
    }

    // columns of A, and the accumulated right rotation (columns of V)
    let mut w: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| f64::from(u8::from(i == j))).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = dots(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = w
        .iter()
        .enumerate()
        .map(|(j, col)| (col.iter().map(|x| x * x).sum::<f64>().sqrt(), j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut values = Vec::with_capacity(cols);
    let mut u = Vec::with_capacity(cols);
    let mut vs = Vec::with_capacity(cols);
    for (sigma, j) in order {
        let left = if sigma > 0.0 {
            w[j].iter().map(|x| x / sigma).collect()
        } else {
            vec![0.0; rows]
        };
        values.push(sigma);
        u.push(left);
        vs.push(v[j].clone());
    }
    Svd { values, u, v: vs }
}

fn dots(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    x.iter().zip(y).fold((0.0, 0.0, 0.0), |(a, b, g), (&xi, &yi)| {
        (a + xi * xi, b + yi * yi, g + xi * yi)
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reconstruct(s: &Svd, rows: usize, cols: usize) -> Vec<f64> {
        let mut out = vec![0.0; rows * cols];
        for k in 0..s.values.len() {
            for i in 0..rows {
                for j in 0..cols {
                    out[i * cols + j] += s.values[k] * s.u[k][i] * s.v[k][j];
                }
            }
        }
        out
    }

    fn check(a: &[f64], rows: usize, cols: usize) {
        let s = svd(a, rows, cols);
        let fro2: f64 = a.iter().map(|x| x * x).sum();
        let sum2: f64 = s.values.iter().map(|x| x * x).sum();
        assert!((fro2 - sum2).abs() <= 1e-12 * fro2.max(1.0));
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
        for (x, y) in reconstruct(&s, rows, cols).iter().zip(a) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        for a in 0..s.v.len() {
            for b in 0..s.v.len() {
                let d: f64 = s.v[a].iter().zip(&s.v[b]).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_and_known_values() {
        let s = svd(&[3.0, 0.0, 0.0, -4.0], 2, 2);
        assert_eq!(s.values, vec![4.0, 3.0]);
        let s = svd(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 2, 3);
        assert!((s.values[0] - 6f64.sqrt()).abs() < 1e-14);
        assert!(s.values[1].abs() < 1e-14);
    }

    #[test]
    fn rank_one_tall_matrix() {
        // thin rank-one input whose largest value must not exceed the Frobenius norm
        let x = [0.3, -0.1, 0.05, 0.2, -0.15, 0.01, 0.02, -0.33];
        let y = [0.6, -0.8];
        let a: Vec<f64> = x.iter().flat_map(|xi| y.iter().map(move |yj| xi * yj)).collect();
        let s = svd(&a, 8, 2);
        let fro: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((s.values[0] - fro).abs() < 1e-15);
        assert!(s.values[1] < 1e-16);
        check(&a, 8, 2);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&[0.0; 6], 3, 2);
        assert_eq!(s.values, vec![0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn decomposes_random_matrices(
            rows in 1usize..12,
            cols in 1usize..12,
            seed in proptest::collection::vec(-1.0f64..1.0, 144),
        ) {
            check(&seed[..rows * cols], rows, cols);
        }
    }
}
