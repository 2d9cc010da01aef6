use crate::basis::{anchors, Anchor, GlobalKnots};
use crate::error::{Error, Result};
use crate::tmesh::{Axis, Cell, Direction, Segment, TMesh};

use super::Rect;

/// One mesh of the nested sequence together with the data derived from it.
#[derive(Debug, Clone)]
pub struct Level {
    pub alpha: usize,
    pub mesh: TMesh,
    pub ext: TMesh,
    pub knots: GlobalKnots,
    /// Index of each parent line in this level (empty for level 1).
    pub h_map: Vec<usize>,
    pub v_map: Vec<usize>,
    pub anchors: Vec<Anchor>,
    /// Bezier elements: positive-area cells of the extended mesh.
    pub elements: Vec<(Cell, Rect)>,
}

impl Level {
    pub fn new(alpha: usize, mesh: TMesh, knots: GlobalKnots, h_map: Vec<usize>, v_map: Vec<usize>) -> Result<Level> {
        if knots.h().len() != mesh.m() || knots.v().len() != mesh.n() {
            return Err(Error::Incompatible(format!(
                "knot vectors of length {}x{} for a {}x{} index domain",
                knots.h().len(),
                knots.v().len(),
                mesh.m(),
                mesh.n()
            )));
        }
        knots.check(mesh.p(), mesh.q())?;
        let report = mesh.validate();
        if !report.is_valid() {
            return Err(Error::InvalidMesh(format!("{:?}", report.violations)));
        }
        let anchors = anchors(&mesh)?;
        let ext = mesh.extended();
        let elements = ext
            .cells()
            .iter()
            .map(|c| (*c, Rect::new(knots.s(c.i0), knots.s(c.i1), knots.t(c.j0), knots.t(c.j1))))
            .filter(|(_, r)| r.area() > 0.0)
            .collect();
        Ok(Level { alpha, mesh, ext, knots, h_map, v_map, anchors, elements })
    }

    /// Builds the next level: subdivide every element, then extend
    /// T-junctions until the mesh is analysis-suitable.
    pub fn refine(&self) -> Result<Level> {
        let (mesh, knots, h_map, v_map) = subdivide(self)?;
        let mesh = make_analysis_suitable(mesh)?;
        Level::new(self.alpha + 1, mesh, knots, h_map, v_map)
    }
}

fn refine_knots(k: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut out = Vec::with_capacity(2 * k.len());
    let mut map = Vec::with_capacity(k.len());
    for (idx, &x) in k.iter().enumerate() {
        out.push(x);
        map.push(out.len());
        if let Some(&y) = k.get(idx + 1) {
            if y > x {
                out.push(0.5 * (x + y));
            }
        }
    }
    (out, map)
}

/// Index in `lo..=hi` whose knot is `x` up to rounding of the midpoint.
fn position(knots: &[f64], lo: usize, hi: usize, x: f64) -> Option<usize> {
    let tol = 1e-12 * (knots[hi - 1] - knots[lo - 1]);
    (lo..=hi).find(|&k| (knots[k - 1] - x).abs() <= tol)
}

/// Splits every Bezier element of `parent` into four congruent children on
/// a re-gridded index domain. The parent's extended mesh is carried over.
pub fn subdivide(parent: &Level) -> Result<(TMesh, GlobalKnots, Vec<usize>, Vec<usize>)> {
    let (h, h_map) = refine_knots(parent.knots.h());
    let (v, v_map) = refine_knots(parent.knots.v());
    let src = &parent.ext;
    let (p, q) = (src.p(), src.q());
    let mut mesh = TMesh::empty(h.len(), v.len(), p, q)?;
    for j in 1..=src.n() {
        for i in 1..src.m() {
            if src.has_h(i, j) {
                mesh.mark_segment(Segment::horizontal(v_map[j - 1], h_map[i - 1], h_map[i]))?;
            }
        }
    }
    for i in 1..=src.m() {
        for j in 1..src.n() {
            if src.has_v(i, j) {
                mesh.mark_segment(Segment::vertical(h_map[i - 1], v_map[j - 1], v_map[j]))?;
            }
        }
    }
    let (m, n) = (h.len(), v.len());
    for (cell, rect) in &parent.elements {
        let (sm, tm) = rect.center();
        let (i0, i1) = (h_map[cell.i0 - 1], h_map[cell.i1 - 1]);
        let (j0, j1) = (v_map[cell.j0 - 1], v_map[cell.j1 - 1]);
        let im = position(&h, i0, i1, sm).ok_or(Error::ElementCrossesKnot { s0: rect.s0, s1: rect.s1 })?;
        let jm = position(&v, j0, j1, tm).ok_or(Error::ElementCrossesKnot { s0: rect.t0, s1: rect.t1 })?;
        // new lines that reach the parametric boundary run on through the frame
        let j_lo = if v[j0 - 1] == 0.0 { 1 } else { j0 };
        let j_hi = if v[j1 - 1] == 1.0 { n } else { j1 };
        let i_lo = if h[i0 - 1] == 0.0 { 1 } else { i0 };
        let i_hi = if h[i1 - 1] == 1.0 { m } else { i1 };
        mesh.mark_segment(Segment::vertical(im, j_lo, j_hi))?;
        mesh.mark_segment(Segment::horizontal(jm, i_lo, i_hi))?;
    }
    mesh.derive_vertices();
    Ok((mesh, GlobalKnots::new(h, v), h_map, v_map))
}

fn in_band(mesh: &TMesh, i: usize, j: usize) -> bool {
    let (m, n, p, q) = (mesh.m(), mesh.n(), mesh.p(), mesh.q());
    i <= p + 1 || i >= m - p || j <= q + 1 || j >= n - q
}

/// Continues every T-junction in the zero-area band straight on until it
/// meets the skeleton, so the frame stays free of T-junctions.
fn close_band(mesh: &mut TMesh) -> Result<bool> {
    let mut changed = false;
    loop {
        let Some(tj) = mesh.t_junctions().into_iter().find(|t| in_band(mesh, t.vertex.0, t.vertex.1)) else {
            break;
        };
        let (mut i, mut j) = tj.vertex;
        loop {
            let seg = match tj.missing {
                Direction::Left => {
                    i -= 1;
                    Segment::horizontal(j, i, i + 1)
                }
                Direction::Right => {
                    i += 1;
                    Segment::horizontal(j, i - 1, i)
                }
                Direction::Down => {
                    j -= 1;
                    Segment::vertical(i, j, j + 1)
                }
                Direction::Up => {
                    j += 1;
                    Segment::vertical(i, j - 1, j)
                }
            };
            mesh.mark_segment(seg)?;
            let hit = match tj.missing.axis() {
                Axis::Horizontal => mesh.on_vertical_skeleton(i, j),
                Axis::Vertical => mesh.on_horizontal_skeleton(i, j),
            };
            let boundary = i == 1 || i == mesh.m() || j == 1 || j == mesh.n();
            let joins = match tj.missing {
                Direction::Left => mesh.has_h(i - 1, j),
                Direction::Right => mesh.has_h(i, j),
                Direction::Down => mesh.has_v(i, j - 1),
                Direction::Up => mesh.has_v(i, j),
            };
            if boundary || joins || (hit && !in_band(mesh, i, j)) {
                break;
            }
        }
        mesh.derive_vertices();
        changed = true;
    }
    Ok(changed)
}

/// Materializes offending extensions, shortest first with ties broken by
/// T-junction position, until no two extensions intersect or overlap.
pub fn make_analysis_suitable(mut mesh: TMesh) -> Result<TMesh> {
    let rounds = 2 * mesh.m() * mesh.n();
    for _ in 0..rounds {
        close_band(&mut mesh)?;
        let mut offending: Vec<_> = mesh
            .intersecting_extensions()
            .into_iter()
            .flat_map(|pair| [pair.horizontal, pair.vertical])
            .chain(mesh.overlapping_extensions().into_iter().flat_map(|(a, b)| [a, b]))
            .collect();
        if offending.is_empty() {
            return Ok(mesh);
        }
        offending.sort_by_key(|e| (e.length(), e.owner.vertex.1, e.owner.vertex.0, e.owner.missing));
        let first = offending[0];
        mesh.materialize(&first);
        mesh.derive_vertices();
    }
    Err(Error::NoFixedPoint(rounds))
}
