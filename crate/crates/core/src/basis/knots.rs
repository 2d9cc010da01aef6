use crate::error::{Error, Result};

/// Global open knot vectors. Values are dyadic `f64`, so comparisons and
/// midpoints are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalKnots {
    h: Vec<f64>,
    v: Vec<f64>,
}

impl GlobalKnots {
    pub fn new(h: Vec<f64>, v: Vec<f64>) -> Self {
        GlobalKnots { h, v }
    }

    /// Open knot vectors with uniformly spaced interior knots for an
    /// `m x n` index domain.
    pub fn uniform(m: usize, n: usize, p: usize, q: usize) -> Self {
        GlobalKnots { h: uniform_open(m, p), v: uniform_open(n, q) }
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Knot value at 1-based horizontal index `i`.
    pub fn s(&self, i: usize) -> f64 {
        self.h[i - 1]
    }

    pub fn t(&self, j: usize) -> f64 {
        self.v[j - 1]
    }

    pub fn check(&self, p: usize, q: usize) -> Result<()> {
        check_open(&self.h, p).map_err(|e| Error::InvalidMesh(format!("horizontal knots: {e}")))?;
        check_open(&self.v, q).map_err(|e| Error::InvalidMesh(format!("vertical knots: {e}")))
    }
}

pub fn uniform_open(len: usize, p: usize) -> Vec<f64> {
    assert!(len >= 2 * p + 2, "need at least one knot span");
    let spans = len - 2 * p - 1;
    (0..len)
        .map(|k| {
            if k <= p {
                0.0
            } else if k >= len - p - 1 {
                1.0
            } else {
                (k - p) as f64 / spans as f64
            }
        })
        .collect()
}

fn check_open(k: &[f64], p: usize) -> std::result::Result<(), String> {
    let len = k.len();
    if len < 2 * p + 2 {
        return Err(format!("length {len} too short for degree {p}"));
    }
    if k.windows(2).any(|w| w[0] > w[1]) {
        return Err("not nondecreasing".into());
    }
    if k[..=p].iter().any(|x| *x != 0.0) || k[len - p - 1..].iter().any(|x| *x != 1.0) {
        return Err("end knots must repeat 0 and 1 with multiplicity p+1".into());
    }
    if k[p + 1..len - p - 1].iter().any(|x| *x <= 0.0 || *x >= 1.0) {
        return Err("interior knots must lie strictly inside (0, 1)".into());
    }
    Ok(())
}
