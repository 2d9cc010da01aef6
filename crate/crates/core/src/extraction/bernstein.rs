//! Bernstein polynomials on the biunit interval.

use crate::scalar::{binomial, powi, Scalar};

/// `B_{i,p}(xi)` for `1 <= i <= p + 1`, `xi` in `[-1, 1]`.
pub fn bernstein<S: Scalar>(p: usize, i: usize, xi: S) -> S {
    assert!((1..=p + 1).contains(&i), "Bernstein index {i} out of range for degree {p}");
    let one = S::one();
    let two_p = powi(one + one, p);
    binomial::<S>(p, i - 1) * powi(one - xi, p + 1 - i) * powi(one + xi, i - 1) / two_p
}

/// All `p + 1` values at `xi`.
pub fn bernstein_all<S: Scalar>(p: usize, xi: S) -> Vec<S> {
    (1..=p + 1).map(|i| bernstein(p, i, xi)).collect()
}

/// Values and derivatives up to `order` with respect to `xi`: entry `k`
/// holds the `k`-th derivatives of all `p + 1` functions.
pub fn bernstein_derivatives(p: usize, xi: f64, order: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > p {
            out.push(vec![0.0; p + 1]);
            continue;
        }
        // d^k B_{i,p} = p!/(p-k)! / 2^k * sum_r (-1)^{k-r} C(k, r) B_{i-r, p-k}
        let lower = bernstein_all(p - k, xi);
        let scale = (0..k).fold(1.0, |acc, r| acc * (p - r) as f64) / 2f64.powi(k as i32);
        let vals = (0..=p)
            .map(|i| {
                let mut acc = 0.0;
                for r in 0..=k {
                    if i >= r && i - r <= p - k {
                        let sign = if (k - r) % 2 == 0 { 1.0 } else { -1.0 };
                        acc += sign * binomial::<f64>(k, r) * lower[i - r];
                    }
                }
                scale * acc
            })
            .collect();
        out.push(vals);
    }
    out
}

/// Bivariate index `a(i, j) = (p + 1)(j - 1) + i`, all 1-based.
pub fn bern_index(p: usize, i: usize, j: usize) -> usize {
    (p + 1) * (j - 1) + i
}
