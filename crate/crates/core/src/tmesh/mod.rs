//! T-meshes in the integer index domain `[1, m] x [1, n]`.
//!
//! The skeleton is stored as dense bitmaps of unit segments, which keeps
//! every topological predicate in exact integer arithmetic. Vertices are an
//! explicit set: a straight run of unit segments is one edge until a vertex
//! splits it.

mod extension;
pub mod io;
pub mod random;
mod validate;

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use extension::{Extension, ExtensionPair};
pub use validate::{ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Direction of the edge that is absent at a T-junction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Left,
    Right,
    Down,
    Up,
}

impl Direction {
    pub fn axis(self) -> Axis {
        match self {
            Direction::Left | Direction::Right => Axis::Horizontal,
            Direction::Down | Direction::Up => Axis::Vertical,
        }
    }
}

/// Closed axis-aligned integer segment `{line} x [lo, hi]` (vertical) or
/// `[lo, hi] x {line}` (horizontal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub axis: Axis,
    pub line: usize,
    pub lo: usize,
    pub hi: usize,
}

impl Segment {
    pub fn horizontal(j: usize, i0: usize, i1: usize) -> Self {
        Segment { axis: Axis::Horizontal, line: j, lo: i0.min(i1), hi: i0.max(i1) }
    }

    pub fn vertical(i: usize, j0: usize, j1: usize) -> Self {
        Segment { axis: Axis::Vertical, line: i, lo: j0.min(j1), hi: j0.max(j1) }
    }

    pub fn endpoints(&self) -> [(usize, usize); 2] {
        match self.axis {
            Axis::Horizontal => [(self.lo, self.line), (self.hi, self.line)],
            Axis::Vertical => [(self.line, self.lo), (self.line, self.hi)],
        }
    }

    /// Closed-set intersection of a horizontal and a vertical segment.
    pub fn crosses(&self, other: &Segment) -> bool {
        let (h, v) = match (self.axis, other.axis) {
            (Axis::Horizontal, Axis::Vertical) => (self, other),
            (Axis::Vertical, Axis::Horizontal) => (other, self),
            _ => return false,
        };
        h.lo <= v.line && v.line <= h.hi && v.lo <= h.line && h.line <= v.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TJunction {
    pub vertex: (usize, usize),
    pub missing: Direction,
}

/// Open rectangle `(i0, i1) x (j0, j1)` of the index domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl Cell {
    pub fn index_area(&self) -> usize {
        (self.i1 - self.i0) * (self.j1 - self.j0)
    }
}

/// Closed index rectangle `[i0, i1] x [j0, j1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRect {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl IndexRect {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.i0 <= i && i <= self.i1 && self.j0 <= j && j <= self.j1
    }
}

/// Active region and the closed frame band around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionSplit {
    pub active: IndexRect,
    pub domain: IndexRect,
}

impl RegionSplit {
    /// Closure of the complement of the active region.
    pub fn in_frame(&self, i: usize, j: usize) -> bool {
        let a = &self.active;
        self.domain.contains(i, j) && (i <= a.i0 || i >= a.i1 || j <= a.j0 || j >= a.j1)
    }

    pub fn in_active(&self, i: usize, j: usize) -> bool {
        self.active.contains(i, j)
    }
}

#[derive(Clone)]
pub struct TMesh {
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    vertices: Vec<bool>,
    h_edges: Vec<bool>,
    v_edges: Vec<bool>,
    cells: OnceLock<Vec<Cell>>,
}

impl fmt::Debug for TMesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TMesh")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("p", &self.p)
            .field("q", &self.q)
            .field("vertices", &self.vertex_count())
            .finish()
    }
}

impl PartialEq for TMesh {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.p == other.p
            && self.q == other.q
            && self.vertices == other.vertices
            && self.h_edges == other.h_edges
            && self.v_edges == other.v_edges
    }
}

impl Eq for TMesh {}

impl TMesh {
    /// Empty mesh (no vertices or edges) on `[1, m] x [1, n]`.
    pub fn empty(m: usize, n: usize, p: usize, q: usize) -> Result<Self> {
        if m < 2 || n < 2 || p == 0 || q == 0 {
            return Err(Error::MalformedMesh(format!("bad dimensions m={m} n={n} p={p} q={q}")));
        }
        Ok(TMesh {
            m,
            n,
            p,
            q,
            vertices: vec![false; m * n],
            h_edges: vec![false; (m - 1) * n],
            v_edges: vec![false; m * (n - 1)],
            cells: OnceLock::new(),
        })
    }

    /// Full tensor-product grid: every index line present.
    pub fn tensor(m: usize, n: usize, p: usize, q: usize) -> Result<Self> {
        let mut mesh = Self::empty(m, n, p, q)?;
        for j in 1..=n {
            mesh.add_segment(Segment::horizontal(j, 1, m))?;
        }
        for i in 1..=m {
            mesh.add_segment(Segment::vertical(i, 1, n))?;
        }
        mesh.derive_vertices();
        Ok(mesh)
    }

    /// Tensor grid with open knot structure for `nx` by `ny` Bezier spans.
    pub fn tensor_spans(nx: usize, ny: usize, p: usize, q: usize) -> Result<Self> {
        Self::tensor(nx + 2 * p + 1, ny + 2 * q + 1, p, q)
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn q(&self) -> usize {
        self.q
    }

    fn vid(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.m + (i - 1)
    }

    pub fn in_range(&self, i: usize, j: usize) -> bool {
        (1..=self.m).contains(&i) && (1..=self.n).contains(&j)
    }

    pub fn is_vertex(&self, i: usize, j: usize) -> bool {
        self.in_range(i, j) && self.vertices[self.vid(i, j)]
    }

    /// Unit horizontal segment `[i, i+1] x {j}`.
    pub fn has_h(&self, i: usize, j: usize) -> bool {
        i >= 1 && i < self.m && (1..=self.n).contains(&j) && self.h_edges[(j - 1) * (self.m - 1) + (i - 1)]
    }

    /// Unit vertical segment `{i} x [j, j+1]`.
    pub fn has_v(&self, i: usize, j: usize) -> bool {
        j >= 1 && j < self.n && (1..=self.m).contains(&i) && self.v_edges[(j - 1) * self.m + (i - 1)]
    }

    pub fn on_vertical_skeleton(&self, i: usize, j: usize) -> bool {
        self.has_v(i, j) || (j > 1 && self.has_v(i, j - 1))
    }

    pub fn on_horizontal_skeleton(&self, i: usize, j: usize) -> bool {
        self.has_h(i, j) || (i > 1 && self.has_h(i - 1, j))
    }

    /// Incident unit segments in order left, right, down, up.
    pub fn incidence(&self, i: usize, j: usize) -> [bool; 4] {
        [i > 1 && self.has_h(i - 1, j), self.has_h(i, j), j > 1 && self.has_v(i, j - 1), self.has_v(i, j)]
    }

    pub fn valence(&self, i: usize, j: usize) -> usize {
        self.incidence(i, j).iter().filter(|b| **b).count()
    }

    /// Does the vertical skeleton cover `{i} x [j0, j1]` entirely?
    pub fn v_covers(&self, i: usize, j0: usize, j1: usize) -> bool {
        if j0 == j1 {
            return self.on_vertical_skeleton(i, j0);
        }
        (j0..j1).all(|j| self.has_v(i, j))
    }

    /// Does the horizontal skeleton cover `[i0, i1] x {j}` entirely?
    pub fn h_covers(&self, j: usize, i0: usize, i1: usize) -> bool {
        if i0 == i1 {
            return self.on_horizontal_skeleton(i0, j);
        }
        (i0..i1).all(|i| self.has_h(i, j))
    }

    fn set_vertex(&mut self, i: usize, j: usize) {
        let id = self.vid(i, j);
        self.vertices[id] = true;
    }

    pub fn add_vertex(&mut self, i: usize, j: usize) -> Result<()> {
        if !self.in_range(i, j) {
            return Err(Error::MalformedMesh(format!("vertex ({i},{j}) out of range")));
        }
        self.set_vertex(i, j);
        self.cells = OnceLock::new();
        Ok(())
    }

    /// Marks every unit segment of `seg` and makes its endpoints vertices.
    pub fn add_segment(&mut self, seg: Segment) -> Result<()> {
        self.mark_segment(seg)?;
        for (i, j) in seg.endpoints() {
            self.set_vertex(i, j);
        }
        Ok(())
    }

    /// Marks the unit segments of `seg` without touching the vertex set.
    pub fn mark_segment(&mut self, seg: Segment) -> Result<()> {
        let [(i0, j0), (i1, j1)] = seg.endpoints();
        if !self.in_range(i0, j0) || !self.in_range(i1, j1) {
            return Err(Error::MalformedMesh(format!("segment {seg:?} out of range")));
        }
        match seg.axis {
            Axis::Horizontal => {
                for i in seg.lo..seg.hi {
                    let id = (seg.line - 1) * (self.m - 1) + (i - 1);
                    self.h_edges[id] = true;
                }
            }
            Axis::Vertical => {
                for j in seg.lo..seg.hi {
                    let id = (j - 1) * self.m + (seg.line - 1);
                    self.v_edges[id] = true;
                }
            }
        }
        self.cells = OnceLock::new();
        Ok(())
    }

    /// Removes the unit segments of `seg`; vertices are left alone.
    pub fn remove_segment(&mut self, seg: Segment) {
        match seg.axis {
            Axis::Horizontal => {
                for i in seg.lo..seg.hi {
                    let id = (seg.line - 1) * (self.m - 1) + (i - 1);
                    self.h_edges[id] = false;
                }
            }
            Axis::Vertical => {
                for j in seg.lo..seg.hi {
                    let id = (j - 1) * self.m + (seg.line - 1);
                    self.v_edges[id] = false;
                }
            }
        }
        self.cells = OnceLock::new();
    }

    /// Recomputes the vertex set from the skeleton: a point is a vertex iff
    /// its incident unit segments are not empty and not a straight pass.
    pub fn derive_vertices(&mut self) {
        for j in 1..=self.n {
            for i in 1..=self.m {
                let [l, r, d, u] = self.incidence(i, j);
                let count = [l, r, d, u].iter().filter(|b| **b).count();
                let straight = count == 2 && ((l && r) || (d && u));
                let id = self.vid(i, j);
                self.vertices[id] = count > 0 && !straight;
            }
        }
        self.cells = OnceLock::new();
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().filter(|b| **b).count()
    }

    /// Vertices in row-major order (`j` outer, `i` inner).
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.n {
            for i in 1..=self.m {
                if self.vertices[self.vid(i, j)] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Edges as maximal skeleton runs between consecutive vertices.
    pub fn edges(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for j in 1..=self.n {
            let mut i = 1;
            while i < self.m {
                if self.has_h(i, j) {
                    let mut k = i + 1;
                    while k < self.m && self.has_h(k, j) && !self.is_vertex(k, j) {
                        k += 1;
                    }
                    out.push(Segment::horizontal(j, i, k));
                    i = k;
                } else {
                    i += 1;
                }
            }
        }
        for i in 1..=self.m {
            let mut j = 1;
            while j < self.n {
                if self.has_v(i, j) {
                    let mut k = j + 1;
                    while k < self.n && self.has_v(i, k) && !self.is_vertex(i, k) {
                        k += 1;
                    }
                    out.push(Segment::vertical(i, j, k));
                    j = k;
                } else {
                    j += 1;
                }
            }
        }
        out
    }

    /// Cells of the partition, computed by flood fill over unit squares.
    pub fn cells(&self) -> &[Cell] {
        self.cells.get_or_init(|| self.flood_cells().into_iter().map(|(c, _)| c).collect())
    }

    /// Components of unit squares with their square counts; a component is a
    /// proper cell iff its count equals its bounding-box area.
    pub(crate) fn flood_cells(&self) -> Vec<(Cell, usize)> {
        let w = self.m - 1;
        let h = self.n - 1;
        let mut seen = vec![false; w * h];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for j0 in 1..=h {
            for i0 in 1..=w {
                if seen[(j0 - 1) * w + (i0 - 1)] {
                    continue;
                }
                let mut bb = Cell { i0, i1: i0 + 1, j0, j1: j0 + 1 };
                let mut count = 0;
                seen[(j0 - 1) * w + (i0 - 1)] = true;
                stack.push((i0, j0));
                while let Some((i, j)) = stack.pop() {
                    count += 1;
                    bb.i0 = bb.i0.min(i);
                    bb.i1 = bb.i1.max(i + 1);
                    bb.j0 = bb.j0.min(j);
                    bb.j1 = bb.j1.max(j + 1);
                    let mut visit = |a: usize, b: usize, stack: &mut Vec<(usize, usize)>| {
                        let id = (b - 1) * w + (a - 1);
                        if !seen[id] {
                            seen[id] = true;
                            stack.push((a, b));
                        }
                    };
                    if i > 1 && !self.has_v(i, j) {
                        visit(i - 1, j, &mut stack);
                    }
                    if i < w && !self.has_v(i + 1, j) {
                        visit(i + 1, j, &mut stack);
                    }
                    if j > 1 && !self.has_h(i, j) {
                        visit(i, j - 1, &mut stack);
                    }
                    if j < h && !self.has_h(i, j + 1) {
                        visit(i, j + 1, &mut stack);
                    }
                }
                out.push((bb, count));
            }
        }
        out.sort();
        out
    }

    /// Active region and frame per the degree-dependent band widths.
    pub fn region_split(&self) -> Result<RegionSplit> {
        let fp = (self.p + 1) / 2;
        let fq = (self.q + 1) / 2;
        if self.m < 2 * fp + 1 || self.n < 2 * fq + 1 {
            return Err(Error::EmptyActiveRegion { m: self.m, n: self.n, p: self.p, q: self.q });
        }
        let active = IndexRect { i0: 1 + fp, i1: self.m - fp, j0: 1 + fq, j1: self.n - fq };
        if active.i0 > active.i1 || active.j0 > active.j1 {
            return Err(Error::EmptyActiveRegion { m: self.m, n: self.n, p: self.p, q: self.q });
        }
        Ok(RegionSplit { active, domain: IndexRect { i0: 1, i1: self.m, j0: 1, j1: self.n } })
    }

    /// Interior valence-3 vertices with the direction of their missing edge.
    pub fn t_junctions(&self) -> Vec<TJunction> {
        let mut out = Vec::new();
        for j in 2..self.n {
            for i in 2..self.m {
                if !self.is_vertex(i, j) {
                    continue;
                }
                let inc = self.incidence(i, j);
                if inc.iter().filter(|b| **b).count() != 3 {
                    continue;
                }
                let missing = match inc {
                    [false, _, _, _] => Direction::Left,
                    [_, false, _, _] => Direction::Right,
                    [_, _, false, _] => Direction::Down,
                    _ => Direction::Up,
                };
                out.push(TJunction { vertex: (i, j), missing });
            }
        }
        out
    }

    /// `self ⊆ fine` after mapping coarse indices through `h_map`/`v_map`
    /// (1-based: `h_map[i - 1]` is the fine index of coarse line `i`).
    pub fn included_in_mapped(&self, fine: &TMesh, h_map: &[usize], v_map: &[usize]) -> Result<bool> {
        if self.p != fine.p || self.q != fine.q {
            return Err(Error::Incompatible(format!(
                "degrees ({}, {}) vs ({}, {})",
                self.p, self.q, fine.p, fine.q
            )));
        }
        if h_map.len() != self.m || v_map.len() != self.n {
            return Err(Error::Incompatible("index map length mismatch".into()));
        }
        for (i, j) in self.vertices() {
            if !fine.is_vertex(h_map[i - 1], v_map[j - 1]) {
                return Ok(false);
            }
        }
        for j in 1..=self.n {
            for i in 1..self.m {
                if self.has_h(i, j) && !fine.h_covers(v_map[j - 1], h_map[i - 1], h_map[i]) {
                    return Ok(false);
                }
            }
        }
        for i in 1..=self.m {
            for j in 1..self.n {
                if self.has_v(i, j) && !fine.v_covers(h_map[i - 1], v_map[j - 1], v_map[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `self ⊆ fine` on the same index domain.
    pub fn included_in(&self, fine: &TMesh) -> Result<bool> {
        if self.m != fine.m || self.n != fine.n {
            return Err(Error::Incompatible(format!(
                "index domains {}x{} vs {}x{}",
                self.m, self.n, fine.m, fine.n
            )));
        }
        let h: Vec<usize> = (1..=self.m).collect();
        let v: Vec<usize> = (1..=self.n).collect();
        self.included_in_mapped(fine, &h, &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_grid_has_no_t_junctions() {
        let mesh = TMesh::tensor(8, 8, 3, 3).unwrap();
        assert!(mesh.t_junctions().is_empty());
        assert_eq!(mesh.cells().len(), 49);
        assert_eq!(mesh.vertex_count(), 64);
    }

    #[test]
    fn removing_an_edge_exposes_two_t_junctions() {
        let mut mesh = TMesh::tensor(10, 10, 3, 3).unwrap();
        mesh.remove_segment(Segment::horizontal(5, 5, 6));
        mesh.derive_vertices();
        let tj = mesh.t_junctions();
        assert_eq!(tj.len(), 2);
        assert_eq!(tj[0], TJunction { vertex: (5, 5), missing: Direction::Right });
        assert_eq!(tj[1], TJunction { vertex: (6, 5), missing: Direction::Left });
    }

    #[test]
    fn region_split_formula() {
        let m = TMesh::tensor(9, 9, 3, 3).unwrap().region_split().unwrap();
        assert_eq!(m.active, IndexRect { i0: 3, i1: 7, j0: 3, j1: 7 });
        let m = TMesh::tensor(9, 9, 2, 2).unwrap().region_split().unwrap();
        assert_eq!(m.active, IndexRect { i0: 2, i1: 8, j0: 2, j1: 8 });
        let m = TMesh::tensor(7, 7, 3, 3).unwrap().region_split().unwrap();
        assert_eq!(m.active, IndexRect { i0: 3, i1: 5, j0: 3, j1: 5 });
        assert!(m.in_frame(3, 4));
        assert!(!m.in_frame(4, 4));
    }

    #[test]
    fn empty_active_region_is_an_error() {
        let mesh = TMesh::tensor(3, 9, 5, 3).unwrap();
        assert!(matches!(mesh.region_split(), Err(Error::EmptyActiveRegion { .. })));
    }

    #[test]
    fn inclusion() {
        let full = TMesh::tensor(10, 10, 3, 3).unwrap();
        let mut fewer = full.clone();
        fewer.remove_segment(Segment::horizontal(5, 5, 6));
        fewer.derive_vertices();
        assert!(full.included_in(&full).unwrap());
        assert!(fewer.included_in(&full).unwrap());
        assert!(!full.included_in(&fewer).unwrap());
        let other = TMesh::tensor(10, 10, 2, 3).unwrap();
        assert!(full.included_in(&other).is_err());
    }
}
