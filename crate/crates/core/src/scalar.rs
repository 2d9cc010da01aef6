//! Scalar abstraction shared by the numeric kernels.
//!
//! Spline evaluation, knot insertion and Bernstein conversion only need
//! field operations, so they are written once against [`Scalar`] and run in
//! `f32`, `f64` or exact rational arithmetic. Knot values coming from the
//! T-mesh are dyadic `f64` numbers; converting them into any of the
//! supported scalars is exact for `f64` and [`Rational64`].

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::Num;

pub trait Scalar: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;

    fn from_usize(v: usize) -> Self {
        Self::from_f64(v as f64)
    }

    fn abs_val(self) -> Self {
        if self < Self::zero() {
            Self::zero() - self
        } else {
            self
        }
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Rational64 {
    /// Exact for every dyadic value whose numerator and denominator fit in `i64`.
    fn from_f64(v: f64) -> Self {
        Rational64::approximate_float(v)
            .filter(|r| (*r.numer() as f64) / (*r.denom() as f64) == v)
            .unwrap_or_else(|| dyadic_ratio(v))
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

fn dyadic_ratio(v: f64) -> Rational64 {
    let mut num = v;
    let mut den: i64 = 1;
    while num.fract() != 0.0 && den < (1 << 52) {
        num *= 2.0;
        den *= 2;
    }
    Rational64::new(num as i64, den)
}

/// Binomial coefficient as a scalar.
pub fn binomial<S: Scalar>(n: usize, k: usize) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    S::from_f64(acc as f64)
}

/// Integer power by repeated multiplication.
pub fn powi<S: Scalar>(x: S, n: usize) -> S {
    let mut acc = S::one();
    for _ in 0..n {
        acc = acc * x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        for v in [0.0, 0.5, 0.375, 1.0, 0.0078125, 3.25] {
            let r = Rational64::from_f64(v);
            assert_eq!(r.to_f64(), v);
        }
        assert_eq!(Rational64::from_f64(0.625), Rational64::new(5, 8));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial::<f64>(3, 1), 3.0);
        assert_eq!(binomial::<f64>(4, 2), 6.0);
        assert_eq!(binomial::<f64>(2, 3), 0.0);
    }
}
