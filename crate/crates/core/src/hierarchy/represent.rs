use nalgebra::{DMatrix, DVector};

use super::{Level, Rect};
use crate::basis::bspline::refinement_coefficient;
use crate::basis::{local_index_vectors, BlendingFunction};
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;

/// Product of univariate knot-insertion coefficients of `f` onto `g`.
pub fn refinement_coefficients(f: &BlendingFunction, g: &BlendingFunction) -> f64 {
    let a = refinement_coefficient(&f.h_knots, &g.h_knots, f.p());
    if a == 0.0 {
        return 0.0;
    }
    a * refinement_coefficient(&f.v_knots, &g.v_knots, f.q())
}

/// Points spread over a rectangle, boundary included.
pub(crate) fn sample_points(r: &Rect, k: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(k * k);
    for b in 0..k {
        for a in 0..k {
            // irrational-ish offsets avoid sampling only on knot lines
            let u = ((a as f64) + 0.5 * (1.0 + (a as f64 * 0.618_033_988_75).fract())) / k as f64;
            let v = ((b as f64) + 0.5 * (1.0 + (b as f64 * 0.414_213_562_37).fract())) / k as f64;
            let u = if a == 0 { 0.0 } else if a == k - 1 { 1.0 } else { u.min(1.0) };
            let v = if b == 0 { 0.0 } else if b == k - 1 { 1.0 } else { v.min(1.0) };
            out.push((r.s0 + u * (r.s1 - r.s0), r.t0 + v * (r.t1 - r.t0)));
        }
    }
    out
}

fn residual(f: &BlendingFunction, terms: &[(BlendingFunction, f64)], pts: &[(f64, f64)]) -> f64 {
    pts.iter()
        .map(|&(s, t)| {
            let sum: f64 = terms.iter().map(|(g, c)| c * g.eval(s, t)).sum();
            (f.eval(s, t) - sum).abs()
        })
        .fold(0.0, f64::max)
}

/// Writes `f` in terms of the functions of `fine` whose support lies in the
/// support of `f`. Coefficients come from univariate knot insertion; the
/// result is checked pointwise and, should that fail, recomputed by least
/// squares before giving up.
pub fn represent_coarse_in_fine(f: &BlendingFunction, fine: &Level) -> Result<Vec<(BlendingFunction, f64)>> {
    let supp = Rect::of_support(f);
    let mut cands = Vec::new();
    for a in &fine.anchors {
        let (s, t) = (
            0.5 * (fine.knots.s(a.h.0) + fine.knots.s(a.h.1)),
            0.5 * (fine.knots.t(a.v.0) + fine.knots.t(a.v.1)),
        );
        if !supp.contains_point(s, t) {
            continue;
        }
        let (h, v) = local_index_vectors(&fine.mesh, a)?;
        let g = BlendingFunction::new(*a, h, v, &fine.knots);
        if supp.contains(&Rect::of_support(&g)) {
            cands.push(g);
        }
    }
    let pts = sample_points(&supp, 15);
    let terms: Vec<_> = cands
        .iter()
        .map(|g| (g.clone(), refinement_coefficients(f, g)))
        .filter(|(_, c)| *c != 0.0)
        .collect();
    let res = residual(f, &terms, &pts);
    if res < RESIDUAL_TOL {
        return Ok(terms);
    }
    let fit = least_squares(f, &cands, &pts)?;
    let res_fit = residual(f, &fit, &pts);
    if res_fit < RESIDUAL_TOL {
        return Ok(fit);
    }
    Err(Error::NestingViolated(res.min(res_fit)))
}

fn least_squares(f: &BlendingFunction, cands: &[BlendingFunction], pts: &[(f64, f64)]) -> Result<Vec<(BlendingFunction, f64)>> {
    if cands.is_empty() {
        return Err(Error::NestingViolated(f64::INFINITY));
    }
    let a = DMatrix::from_fn(pts.len(), cands.len(), |r, c| cands[c].eval(pts[r].0, pts[r].1));
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|&(s, t)| f.eval(s, t)));
    let x = a
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| Error::SingularSystem(e.to_string()))?;
    Ok(cands.iter().cloned().zip(x.iter().copied()).filter(|(_, c)| c.abs() > 1e-15).collect())
}
