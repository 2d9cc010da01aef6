use super::{Axis, Direction, Segment, TJunction, TMesh};

/// T-junction extension: the face part runs in the missing-edge direction,
/// the edge part in the opposite one. Both are closed segments on the same
/// index line and share the T-junction as an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    pub owner: TJunction,
    pub face: Segment,
    pub edge: Segment,
}

impl Extension {
    pub fn axis(&self) -> Axis {
        self.face.axis
    }

    /// Union of face and edge parts (contiguous through the T-junction).
    pub fn span(&self) -> Segment {
        Segment { lo: self.face.lo.min(self.edge.lo), hi: self.face.hi.max(self.edge.hi), ..self.face }
    }

    /// Index length of the union.
    pub fn length(&self) -> usize {
        let s = self.span();
        s.hi - s.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionPair {
    pub horizontal: Extension,
    pub vertical: Extension,
}

impl TMesh {
    pub fn face_crossings(&self, axis: Axis) -> usize {
        match axis {
            Axis::Horizontal => (self.p + 1) / 2,
            Axis::Vertical => (self.q + 1) / 2,
        }
    }

    pub fn edge_crossings(&self, axis: Axis) -> usize {
        match axis {
            Axis::Horizontal => self.p / 2,
            Axis::Vertical => self.q / 2,
        }
    }

    /// Walks from `start` along `axis` in direction `step` (+1/-1), counting
    /// orthogonal skeleton crossings; stops after `count` of them or at the
    /// domain boundary. Returns the final coordinate.
    fn trace(&self, axis: Axis, line: usize, start: usize, forward: bool, count: usize) -> usize {
        let limit = match axis {
            Axis::Horizontal => self.m,
            Axis::Vertical => self.n,
        };
        let mut pos = start;
        let mut crossed = 0;
        while crossed < count {
            if forward {
                if pos == limit {
                    break;
                }
                pos += 1;
            } else {
                if pos == 1 {
                    break;
                }
                pos -= 1;
            }
            let hit = match axis {
                Axis::Horizontal => self.on_vertical_skeleton(pos, line),
                Axis::Vertical => self.on_horizontal_skeleton(line, pos),
            };
            if hit {
                crossed += 1;
            }
        }
        pos
    }

    pub fn extension_of(&self, tj: TJunction) -> Extension {
        let (i, j) = tj.vertex;
        let axis = tj.missing.axis();
        let (line, at) = match axis {
            Axis::Horizontal => (j, i),
            Axis::Vertical => (i, j),
        };
        let forward = matches!(tj.missing, Direction::Right | Direction::Up);
        let f = self.trace(axis, line, at, forward, self.face_crossings(axis));
        let e = self.trace(axis, line, at, !forward, self.edge_crossings(axis));
        let seg = |a: usize, b: usize| Segment { axis, line, lo: a.min(b), hi: a.max(b) };
        Extension { owner: tj, face: seg(at, f), edge: seg(at, e) }
    }

    /// One extension per T-junction, in T-junction order.
    pub fn extensions(&self) -> Vec<Extension> {
        self.t_junctions().into_iter().map(|tj| self.extension_of(tj)).collect()
    }

    /// Pairs of horizontal and vertical extensions that intersect as closed
    /// segments.
    pub fn intersecting_extensions(&self) -> Vec<ExtensionPair> {
        let ext = self.extensions();
        let (h, v): (Vec<_>, Vec<_>) = ext.into_iter().partition(|e| e.axis() == Axis::Horizontal);
        let mut out = Vec::new();
        for a in &h {
            let sa = a.span();
            for b in &v {
                if sa.crosses(&b.span()) {
                    out.push(ExtensionPair { horizontal: *a, vertical: *b });
                }
            }
        }
        out
    }

    /// Analysis-suitability with the offending pairs for diagnostics.
    pub fn analysis_suitability(&self) -> (bool, Vec<ExtensionPair>) {
        let pairs = self.intersecting_extensions();
        (pairs.is_empty(), pairs)
    }

    pub fn is_analysis_suitable(&self) -> bool {
        self.intersecting_extensions().is_empty()
    }

    /// Collinear extensions sharing a piece of positive length.
    pub fn overlapping_extensions(&self) -> Vec<(Extension, Extension)> {
        let ext = self.extensions();
        let mut out = Vec::new();
        for (k, a) in ext.iter().enumerate() {
            let sa = a.span();
            for b in &ext[k + 1..] {
                let sb = b.span();
                if sa.axis == sb.axis && sa.line == sb.line && sa.lo.max(sb.lo) < sa.hi.min(sb.hi) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Inserts `ext` into the skeleton as real edges.
    pub fn materialize(&mut self, ext: &Extension) {
        let span = ext.span();
        self.mark_segment(span).expect("extensions stay inside the index domain");
    }

    /// The extended T-mesh: every T-junction extension added as edges, with
    /// the induced vertices.
    pub fn extended(&self) -> TMesh {
        let mut out = self.clone();
        for e in self.extensions() {
            out.materialize(&e);
        }
        out.derive_vertices();
        out
    }
}
