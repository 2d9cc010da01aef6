//! Univariate B-splines on a local knot vector, generic over the scalar.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which one-sided limit to take at a knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Spans are `[a, b)`.
    Right,
    /// Spans are `(a, b]`; used at the right end of the domain.
    Left,
}

/// Value of the single B-spline `N[k_0, ..., k_{p+1}]` at `s` by the
/// Cox-de Boor triangle. Terms with a zero denominator are dropped.
pub fn value<S: Scalar>(knots: &[S], p: usize, s: S, side: Side) -> S {
    debug_assert_eq!(knots.len(), p + 2);
    let mut n: Vec<S> = (0..=p)
        .map(|i| {
            let (a, b) = (knots[i], knots[i + 1]);
            let inside = match side {
                Side::Right => a <= s && s < b,
                Side::Left => a < s && s <= b,
            };
            if inside {
                S::one()
            } else {
                S::zero()
            }
        })
        .collect();
    for d in 1..=p {
        for i in 0..=(p - d) {
            let mut acc = S::zero();
            let den_l = knots[i + d] - knots[i];
            if den_l != S::zero() {
                acc = acc + (s - knots[i]) / den_l * n[i];
            }
            let den_r = knots[i + d + 1] - knots[i + 1];
            if den_r != S::zero() {
                acc = acc + (knots[i + d + 1] - s) / den_r * n[i + 1];
            }
            n[i] = acc;
        }
    }
    n[0]
}

/// `order`-th derivative by repeated degree reduction.
pub fn derivative<S: Scalar>(knots: &[S], p: usize, s: S, order: usize, side: Side) -> S {
    if order == 0 {
        return value(knots, p, s, side);
    }
    if order > p {
        return S::zero();
    }
    let pp = S::from_usize(p);
    let mut acc = S::zero();
    let den_l = knots[p] - knots[0];
    if den_l != S::zero() {
        acc = acc + pp / den_l * derivative(&knots[..=p], p - 1, s, order - 1, side);
    }
    let den_r = knots[p + 1] - knots[1];
    if den_r != S::zero() {
        acc = acc - pp / den_r * derivative(&knots[1..], p - 1, s, order - 1, side);
    }
    acc
}

/// Boehm insertion of `u` into `knots`, updating the spline coefficients
/// `coef` (one per basis function). `u` must lie in `[knots[0], knots[last]]`.
pub fn insert_knot<S: Scalar>(knots: &mut Vec<S>, coef: &mut Vec<S>, p: usize, u: S) {
    debug_assert_eq!(coef.len() + p + 1, knots.len());
    let last = knots.len() - 1;
    // span index k with knots[k] <= u < knots[k+1], clamped to the last non-empty span
    let mut k = (0..last).filter(|&k| knots[k] <= u && knots[k] < knots[k + 1]).last().unwrap_or(0);
    if u >= knots[last] {
        k = (0..last).filter(|&k| knots[k] < knots[k + 1]).last().unwrap_or(0);
    }
    let mut out = Vec::with_capacity(coef.len() + 1);
    for i in 0..=coef.len() {
        let q = if i + p <= k {
            coef[i]
        } else if i > k {
            coef[i - 1]
        } else {
            let alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
            alpha * coef[i] + (S::one() - alpha) * coef[i - 1]
        };
        out.push(q);
    }
    knots.insert(k + 1, u);
    *coef = out;
}

fn multiplicity<S: Scalar>(knots: &[S], u: S) -> usize {
    knots.iter().filter(|k| **k == u).count()
}

/// Local knots padded with `p` extra copies of each end knot, and the
/// coefficient vector selecting the original function.
fn padded<S: Scalar>(local: &[S], p: usize) -> (Vec<S>, Vec<S>) {
    let first = local[0];
    let last = local[p + 1];
    let mut knots = vec![first; p];
    knots.extend_from_slice(local);
    knots.extend(std::iter::repeat(last).take(p));
    let mut coef = vec![S::zero(); 2 * p + 1];
    coef[p] = S::one();
    (knots, coef)
}

/// Bernstein coefficients of `N[local]` restricted to `[a, b]`.
///
/// The element boundaries are inserted to multiplicity `p`; the `p + 1`
/// functions living on `[a, b]` afterwards are the Bernstein polynomials of
/// that interval. Returns zeros when the function vanishes on `[a, b]`, and
/// an error when a local knot lies strictly inside the interval.
pub fn bezier_coefficients<S: Scalar>(local: &[S], p: usize, a: S, b: S) -> Result<Vec<S>> {
    debug_assert!(a < b);
    if b <= local[0] || a >= local[p + 1] {
        return Ok(vec![S::zero(); p + 1]);
    }
    if local.iter().any(|k| a < *k && *k < b) {
        return Err(Error::ElementCrossesKnot { s0: a.to_f64(), s1: b.to_f64() });
    }
    let (mut knots, mut coef) = padded(local, p);
    for u in [a, b] {
        while multiplicity(&knots, u) < p {
            insert_knot(&mut knots, &mut coef, p, u);
        }
    }
    let r = (0..knots.len() - 1)
        .find(|&r| knots[r] == a && knots[r + 1] == b)
        .expect("interval is a knot span after insertion");
    Ok(coef[r - p..=r].to_vec())
}

/// Coefficient of `N[fine]` in the expansion of `N[coarse]` after inserting
/// the knots of `fine` into `coarse`. Zero when `fine` does not appear as a
/// run of consecutive knots of the refined vector.
pub fn refinement_coefficient<S: Scalar>(coarse: &[S], fine: &[S], p: usize) -> S {
    if fine[0] < coarse[0] || fine[p + 1] > coarse[p + 1] {
        return S::zero();
    }
    let (mut knots, mut coef) = padded(coarse, p);
    let mut k = 0;
    while k < fine.len() {
        let u = fine[k];
        let need = fine.iter().filter(|x| **x == u).count();
        let mut have = multiplicity(&knots, u);
        while have < need.min(p) {
            insert_knot(&mut knots, &mut coef, p, u);
            have += 1;
        }
        while k < fine.len() && fine[k] == u {
            k += 1;
        }
    }
    let width = p + 2;
    for t in 0..=(knots.len() - width) {
        if knots[t..t + width] == *fine {
            return coef.get(t).copied().unwrap_or(S::zero());
        }
    }
    S::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn bernstein01(p: usize, i: usize, x: f64) -> f64 {
        crate::scalar::binomial::<f64>(p, i) * x.powi(i as i32) * (1.0 - x).powi((p - i) as i32)
    }

    #[test]
    fn endpoint_interpolation() {
        assert_eq!(value(&[0.0, 0.0, 0.0, 1.0], 2, 0.0, Side::Right), 1.0);
    }

    #[test]
    fn single_span_functions_are_bernstein() {
        let k = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let vals: Vec<f64> = (0..3).map(|i| value(&k[i..i + 4], 2, 0.5, Side::Right)).collect();
        let oracle: Vec<f64> = (0..3).map(|i| bernstein01(2, i, 0.5)).collect();
        assert_eq!(vals, oracle);
        assert_eq!(vals, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn local_support() {
        let k = [0.0, 1.0, 2.0, 3.0];
        for s in [-0.5, 3.0, 3.5] {
            assert_eq!(value(&k, 2, s, Side::Right), 0.0);
        }
        assert_eq!(value(&k, 2, 3.0, Side::Left), 0.0);
        assert!(value(&k, 2, 1.5, Side::Right) > 0.0);
    }

    #[test]
    fn right_end_is_closed_with_left_side() {
        let k = [0.0, 1.0, 1.0, 1.0];
        assert_eq!(value(&k, 2, 1.0, Side::Right), 0.0);
        assert_eq!(value(&k, 2, 1.0, Side::Left), 1.0);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let k: [f64; 5] = [0.0, 0.25, 0.25, 0.5, 1.0];
        let h = 1e-6;
        for s in [0.1, 0.3, 0.4, 0.7, 0.9] {
            let fd = (value(&k, 3, s + h, Side::Right) - value(&k, 3, s - h, Side::Right)) / (2.0 * h);
            let d = derivative(&k, 3, s, 1, Side::Right);
            assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{s}: {fd} vs {d}");
        }
    }

    #[test]
    fn one_boehm_step_splits_quadratic() {
        // N[0,0,0,1] after inserting 0.5 becomes N[0,0,0,.5] + .5 N[0,0,.5,1]
        let coarse = [0.0, 0.0, 0.0, 1.0];
        let fine = [[0.0, 0.0, 0.0, 0.5], [0.0, 0.0, 0.5, 1.0], [0.0, 0.5, 1.0, 1.0]];
        let c: Vec<f64> = fine.iter().map(|f| refinement_coefficient(&coarse, f, 2)).collect();
        assert_eq!(c, vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn bezier_coefficients_reproduce_values() {
        let k = [0.0, 0.0, 0.5, 1.0];
        let c = bezier_coefficients(&k, 2, 0.0, 0.5).unwrap();
        // Bernstein form on [0, .5]: 0, 1, 0.5 (quadratic middle function)
        assert_eq!(c, vec![0.0, 1.0, 0.5]);
        for x in [0.0, 0.1, 0.25, 0.4] {
            let y = x / 0.5;
            let bez: f64 = (0..3).map(|i| c[i] * bernstein01(2, i, y)).sum();
            assert!((bez - value(&k, 2, x, Side::Right)).abs() < 1e-14);
        }
        assert!(bezier_coefficients(&k, 2, 0.25, 0.75).is_err());
        assert_eq!(bezier_coefficients(&[0.5, 0.6, 0.7, 0.8], 2, 0.0, 0.5).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn exact_rational_agrees_with_f64() {
        let kf = [0.0, 0.25, 0.375, 0.5, 1.0];
        let kr: Vec<Rational64> = kf.iter().map(|x| Rational64::from_f64(*x)).collect();
        let cf = bezier_coefficients(&kf, 3, 0.375, 0.5).unwrap();
        let cr = bezier_coefficients(&kr, 3, kr[2], kr[3]).unwrap();
        for (a, b) in cf.iter().zip(&cr) {
            assert!((*a - b.to_f64()).abs() <= 4.0 * f64::EPSILON, "{a} vs {b}");
        }
    }
}
