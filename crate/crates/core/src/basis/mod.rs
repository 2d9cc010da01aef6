//! Anchors, local knot vectors and T-spline blending functions.

pub mod bspline;
mod knots;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tmesh::TMesh;

pub use bspline::Side;
pub use knots::{uniform_open, GlobalKnots};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnchorKind {
    Vertex,
    HorizontalEdge,
    VerticalEdge,
    Cell,
}

/// Index extent of an anchor: `h = (i, i)` for a vertical line position,
/// `h = (i1, i2)` for an interval; likewise `v`. Anchors order row by row,
/// matching the Bernstein numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Anchor {
    pub h: (usize, usize),
    pub v: (usize, usize),
}

impl Ord for Anchor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.v, self.h).cmp(&(other.v, other.h))
    }
}

impl PartialOrd for Anchor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Anchor {
    pub fn kind(&self) -> AnchorKind {
        match (self.h.0 == self.h.1, self.v.0 == self.v.1) {
            (true, true) => AnchorKind::Vertex,
            (false, true) => AnchorKind::HorizontalEdge,
            (true, false) => AnchorKind::VerticalEdge,
            (false, false) => AnchorKind::Cell,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |(a, b): (usize, usize)| if a == b { format!("{{{a}}}") } else { format!("({a},{b})") };
        write!(f, "{}x{}", part(self.h), part(self.v))
    }
}

/// Anchor kind for the degree parities.
pub fn anchor_kind(p: usize, q: usize) -> AnchorKind {
    match (p % 2, q % 2) {
        (1, 1) => AnchorKind::Vertex,
        (0, 1) => AnchorKind::HorizontalEdge,
        (1, 0) => AnchorKind::VerticalEdge,
        _ => AnchorKind::Cell,
    }
}

/// Anchors of an analysis-suitable mesh.
pub fn anchors(mesh: &TMesh) -> Result<Vec<Anchor>> {
    let bad = mesh.intersecting_extensions().len();
    if bad > 0 {
        return Err(Error::NotAnalysisSuitable(bad));
    }
    anchors_unchecked(mesh)
}

/// Anchors without the suitability precondition.
pub fn anchors_unchecked(mesh: &TMesh) -> Result<Vec<Anchor>> {
    let ar = mesh.region_split()?.active;
    let inside = |a: &Anchor| ar.contains(a.h.0, a.v.0) && ar.contains(a.h.1, a.v.1);
    let mut out: Vec<Anchor> = match anchor_kind(mesh.p(), mesh.q()) {
        AnchorKind::Vertex => mesh.vertices().into_iter().map(|(i, j)| Anchor { h: (i, i), v: (j, j) }).collect(),
        AnchorKind::HorizontalEdge => mesh
            .edges()
            .into_iter()
            .filter(|e| e.axis == crate::tmesh::Axis::Horizontal)
            .map(|e| Anchor { h: (e.lo, e.hi), v: (e.line, e.line) })
            .collect(),
        AnchorKind::VerticalEdge => mesh
            .edges()
            .into_iter()
            .filter(|e| e.axis == crate::tmesh::Axis::Vertical)
            .map(|e| Anchor { h: (e.line, e.line), v: (e.lo, e.hi) })
            .collect(),
        AnchorKind::Cell => {
            mesh.cells().iter().map(|c| Anchor { h: (c.i0, c.i1), v: (c.j0, c.j1) }).collect()
        }
    };
    out.retain(inside);
    out.sort();
    Ok(out)
}

/// Horizontal and vertical local index vectors of `anchor`.
///
/// Marching outward from the anchor, an index line counts only if its
/// skeleton covers the whole extent of the anchor in the other direction.
pub fn local_index_vectors(mesh: &TMesh, anchor: &Anchor) -> Result<(Vec<usize>, Vec<usize>)> {
    let reach_h = (mesh.p() + 1) / 2;
    let reach_v = (mesh.q() + 1) / 2;
    let fail = || Error::SkeletonExhausted(anchor.to_string());

    let (j0, j1) = anchor.v;
    let hit_h = |x: usize| mesh.v_covers(x, j0, j1);
    let left = march(anchor.h.0, false, mesh.m(), reach_h, hit_h).ok_or_else(fail)?;
    let right = march(anchor.h.1, true, mesh.m(), reach_h, hit_h).ok_or_else(fail)?;

    let (i0, i1) = anchor.h;
    let hit_v = |y: usize| mesh.h_covers(y, i0, i1);
    let down = march(anchor.v.0, false, mesh.n(), reach_v, hit_v).ok_or_else(fail)?;
    let up = march(anchor.v.1, true, mesh.n(), reach_v, hit_v).ok_or_else(fail)?;

    let assemble = |lo: Vec<usize>, (a, b): (usize, usize), hi: Vec<usize>| {
        let mut v: Vec<usize> = lo.into_iter().rev().collect();
        v.push(a);
        if b != a {
            v.push(b);
        }
        v.extend(hi);
        v
    };
    Ok((assemble(left, anchor.h, right), assemble(down, anchor.v, up)))
}

fn march(start: usize, forward: bool, limit: usize, count: usize, hit: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    let mut pos = start;
    while out.len() < count {
        if forward {
            if pos >= limit {
                return None;
            }
            pos += 1;
        } else {
            if pos <= 1 {
                return None;
            }
            pos -= 1;
        }
        if hit(pos) {
            out.push(pos);
        }
    }
    Some(out)
}

/// A T-spline blending function: anchor, local index vectors and the
/// corresponding knot values.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendingFunction {
    pub anchor: Anchor,
    pub h_index: Vec<usize>,
    pub v_index: Vec<usize>,
    pub h_knots: Vec<f64>,
    pub v_knots: Vec<f64>,
}

impl BlendingFunction {
    pub fn new(anchor: Anchor, h_index: Vec<usize>, v_index: Vec<usize>, knots: &GlobalKnots) -> Self {
        let h_knots = h_index.iter().map(|&i| knots.s(i)).collect();
        let v_knots = v_index.iter().map(|&j| knots.t(j)).collect();
        BlendingFunction { anchor, h_index, v_index, h_knots, v_knots }
    }

    pub fn p(&self) -> usize {
        self.h_knots.len() - 2
    }

    pub fn q(&self) -> usize {
        self.v_knots.len() - 2
    }

    /// Parametric support `[s0, s1] x [t0, t1]`.
    pub fn support(&self) -> [f64; 4] {
        [self.h_knots[0], *self.h_knots.last().unwrap(), self.v_knots[0], *self.v_knots.last().unwrap()]
    }

    pub fn has_positive_support(&self) -> bool {
        let [s0, s1, t0, t1] = self.support();
        s0 < s1 && t0 < t1
    }

    pub fn eval<S: Scalar>(&self, s: S, t: S) -> S {
        self.univariate_h(s, 0) * self.univariate_v(t, 0)
    }

    /// `(N, dN/ds, dN/dt)`.
    pub fn eval_grad<S: Scalar>(&self, s: S, t: S) -> [S; 3] {
        let (a, da) = (self.univariate_h(s, 0), self.univariate_h(s, 1));
        let (b, db) = (self.univariate_v(t, 0), self.univariate_v(t, 1));
        [a * b, da * b, a * db]
    }

    pub fn univariate_h<S: Scalar>(&self, s: S, order: usize) -> S {
        univariate(&self.h_knots, s, order)
    }

    pub fn univariate_v<S: Scalar>(&self, t: S, order: usize) -> S {
        univariate(&self.v_knots, t, order)
    }

    /// Knot averages of the interior local knots.
    pub fn greville(&self) -> (f64, f64) {
        let avg = |k: &[f64]| k[1..k.len() - 1].iter().sum::<f64>() / (k.len() - 2) as f64;
        (avg(&self.h_knots), avg(&self.v_knots))
    }
}

fn univariate<S: Scalar>(knots: &[f64], x: S, order: usize) -> S {
    let k: Vec<S> = knots.iter().map(|v| S::from_f64(*v)).collect();
    let side = if x == S::one() { Side::Left } else { Side::Right };
    bspline::derivative(&k, knots.len() - 2, x, order, side)
}

/// All blending functions of an analysis-suitable mesh.
pub fn blending_functions(mesh: &TMesh, knots: &GlobalKnots) -> Result<Vec<BlendingFunction>> {
    build_functions(mesh, knots, anchors(mesh)?)
}

pub fn blending_functions_unchecked(mesh: &TMesh, knots: &GlobalKnots) -> Result<Vec<BlendingFunction>> {
    build_functions(mesh, knots, anchors_unchecked(mesh)?)
}

pub(crate) fn build_functions(
    mesh: &TMesh,
    knots: &GlobalKnots,
    anchors: Vec<Anchor>,
) -> Result<Vec<BlendingFunction>> {
    anchors
        .into_iter()
        .map(|a| {
            let (h, v) = local_index_vectors(mesh, &a)?;
            Ok(BlendingFunction::new(a, h, v, knots))
        })
        .collect()
}

/// `w(s, t) = sum_A w_A N_A(s, t)`.
pub fn weight_function<S: Scalar>(funcs: &[BlendingFunction], weights: &[S], s: S, t: S) -> S {
    funcs.iter().zip(weights).fold(S::zero(), |acc, (f, w)| acc + *w * f.eval(s, t))
}

/// `w_A N_A / w` for function `index`, with the weight folded in so that
/// the rational functions sum to one.
pub fn rational_eval<S: Scalar>(funcs: &[BlendingFunction], weights: &[S], index: usize, s: S, t: S) -> Result<S> {
    let w = weight_function(funcs, weights, s, t);
    if w <= S::zero() {
        return Err(Error::NonPositiveWeight { value: w.to_f64(), location: format!("({:?}, {:?})", s, t) });
    }
    Ok(weights[index] * funcs[index].eval(s, t) / w)
}
