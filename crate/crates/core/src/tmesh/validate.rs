use super::{Axis, Cell, TMesh};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Too few indices for one non-empty knot span with open knot vectors.
    DomainTooSmall { m: usize, n: usize, p: usize, q: usize },
    /// Interior vertex whose valence is not 3 or 4.
    Valence { vertex: (usize, usize), valence: usize },
    /// Skeleton turns, ends or branches at a point that is not a vertex.
    UnmarkedJunction { point: (usize, usize) },
    /// Unit segment of the domain boundary missing.
    BoundaryGap { point: (usize, usize), axis: Axis },
    /// A region bounded by the skeleton is not a rectangle.
    NonRectangularCell { bounding_box: Cell },
    /// An edge enters the open interior of a cell.
    EdgeInsideCell { cell: Cell },
    /// A T-junction in the zero-area band around the parametric domain.
    TJunctionInFrame { vertex: (usize, usize) },
    /// A line of the repeated-knot band is not a full line.
    FrameLineIncomplete { axis: Axis, index: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TMesh {
    /// Checks the partition, valence and admissibility invariants.
    pub fn validate(&self) -> ValidationReport {
        let (m, n, p, q) = (self.m, self.n, self.p, self.q);
        let mut v = Vec::new();
        if m < 2 * p + 2 || n < 2 * q + 2 {
            v.push(Violation::DomainTooSmall { m, n, p, q });
        }
        for i in 1..m {
            for j in [1, n] {
                if !self.has_h(i, j) {
                    v.push(Violation::BoundaryGap { point: (i, j), axis: Axis::Horizontal });
                }
            }
        }
        for j in 1..n {
            for i in [1, m] {
                if !self.has_v(i, j) {
                    v.push(Violation::BoundaryGap { point: (i, j), axis: Axis::Vertical });
                }
            }
        }
        for j in 1..=n {
            for i in 1..=m {
                let [l, r, d, u] = self.incidence(i, j);
                let count = [l, r, d, u].iter().filter(|b| **b).count();
                let interior = i > 1 && i < m && j > 1 && j < n;
                if self.is_vertex(i, j) {
                    if interior && count != 3 && count != 4 {
                        v.push(Violation::Valence { vertex: (i, j), valence: count });
                    }
                } else {
                    let straight = count == 2 && ((l && r) || (d && u));
                    if count != 0 && !straight {
                        v.push(Violation::UnmarkedJunction { point: (i, j) });
                    }
                }
            }
        }
        for (bb, count) in self.flood_cells() {
            if count != bb.index_area() {
                v.push(Violation::NonRectangularCell { bounding_box: bb });
            } else if self.has_interior_edge(&bb) {
                v.push(Violation::EdgeInsideCell { cell: bb });
            }
        }
        for tj in self.t_junctions() {
            let (i, j) = tj.vertex;
            if i <= p + 1 || i >= m - p || j <= q + 1 || j >= n - q {
                v.push(Violation::TJunctionInFrame { vertex: tj.vertex });
            }
        }
        for i in (1..=(p + 1).min(m)).chain(m.saturating_sub(p).max(1)..=m) {
            if !self.v_covers(i, 1, n) {
                v.push(Violation::FrameLineIncomplete { axis: Axis::Vertical, index: i });
            }
        }
        for j in (1..=(q + 1).min(n)).chain(n.saturating_sub(q).max(1)..=n) {
            if !self.h_covers(j, 1, m) {
                v.push(Violation::FrameLineIncomplete { axis: Axis::Horizontal, index: j });
            }
        }
        v.dedup();
        ValidationReport { violations: v }
    }

    fn has_interior_edge(&self, c: &Cell) -> bool {
        for j in (c.j0 + 1)..c.j1 {
            for i in c.i0..c.i1 {
                if self.has_h(i, j) {
                    return true;
                }
            }
        }
        for i in (c.i0 + 1)..c.i1 {
            for j in c.j0..c.j1 {
                if self.has_v(i, j) {
                    return true;
                }
            }
        }
        false
    }
}
