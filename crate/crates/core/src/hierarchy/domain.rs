use std::collections::BTreeSet;

use super::Rect;
use crate::tmesh::Cell;

/// A union of closed parametric rectangles, tracked on the grid of unique
/// knot values of one level so that inclusion tests are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    s: Vec<f64>,
    t: Vec<f64>,
    covered: Vec<bool>,
    /// Summed-area table over `covered`, `(s.len()) x (t.len())`.
    prefix: Vec<u32>,
    /// Parent-level element cells whose closures make up the domain.
    parts: BTreeSet<Cell>,
}

fn unique(k: &[f64]) -> Vec<f64> {
    let mut u = k.to_vec();
    u.dedup();
    u
}

impl Domain {
    pub fn empty(h: &[f64], v: &[f64]) -> Domain {
        let (s, t) = (unique(h), unique(v));
        let cells = (s.len() - 1) * (t.len() - 1);
        let mut d = Domain { s, t, covered: vec![false; cells], prefix: Vec::new(), parts: BTreeSet::new() };
        d.rebuild_prefix();
        d
    }

    pub fn full(h: &[f64], v: &[f64]) -> Domain {
        let mut d = Domain::empty(h, v);
        d.covered.iter_mut().for_each(|c| *c = true);
        d.rebuild_prefix();
        d
    }

    fn nx(&self) -> usize {
        self.s.len() - 1
    }

    fn rebuild_prefix(&mut self) {
        let (nx, ny) = (self.nx(), self.t.len() - 1);
        let w = nx + 1;
        let mut pre = vec![0u32; w * (ny + 1)];
        for b in 0..ny {
            for a in 0..nx {
                let c = self.covered[b * nx + a] as u32;
                pre[(b + 1) * w + a + 1] = c + pre[b * w + a + 1] + pre[(b + 1) * w + a] - pre[b * w + a];
            }
        }
        self.prefix = pre;
    }

    fn span(&self, r: &Rect) -> Option<(usize, usize, usize, usize)> {
        let find = |k: &[f64], x: f64| k.binary_search_by(|y| y.partial_cmp(&x).unwrap()).ok();
        Some((find(&self.s, r.s0)?, find(&self.s, r.s1)?, find(&self.t, r.t0)?, find(&self.t, r.t1)?))
    }

    /// Adds a rectangle whose sides lie on grid lines. Returns false if it
    /// does not.
    pub fn insert(&mut self, part: Cell, r: &Rect) -> bool {
        let Some((a0, a1, b0, b1)) = self.span(r) else { return false };
        let nx = self.nx();
        for b in b0..b1 {
            for a in a0..a1 {
                self.covered[b * nx + a] = true;
            }
        }
        self.parts.insert(part);
        self.rebuild_prefix();
        true
    }

    pub fn parts(&self) -> &BTreeSet<Cell> {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        !self.covered.iter().any(|c| *c)
    }

    fn count(&self, a0: usize, a1: usize, b0: usize, b1: usize) -> u32 {
        let w = self.nx() + 1;
        let p = &self.prefix;
        p[b1 * w + a1] + p[b0 * w + a0] - p[b0 * w + a1] - p[b1 * w + a0]
    }

    /// `r ⊆ domain`. Rectangles off the grid are reported as not contained.
    pub fn contains_rect(&self, r: &Rect) -> bool {
        match self.span(r) {
            Some((a0, a1, b0, b1)) => {
                a1 > a0 && b1 > b0 && self.count(a0, a1, b0, b1) as usize == (a1 - a0) * (b1 - b0)
            }
            None => false,
        }
    }

    /// The interiors of `r` and the domain meet.
    pub fn meets_rect(&self, r: &Rect) -> bool {
        match self.span(r) {
            Some((a0, a1, b0, b1)) => self.count(a0, a1, b0, b1) > 0,
            None => true,
        }
    }

    /// `(s, t)` lies in the closed domain.
    pub fn contains_point(&self, s: f64, t: f64) -> bool {
        // grid cells whose closure holds x
        let range = |k: &[f64], x: f64| {
            let nc = k.len() - 1;
            let lo = k[1..].partition_point(|y| *y < x);
            let hi = k[..nc].partition_point(|y| *y <= x).checked_sub(1)?;
            (lo <= hi).then_some((lo, hi))
        };
        let (Some((a0, a1)), Some((b0, b1))) = (range(&self.s, s), range(&self.t, t)) else { return false };
        let nx = self.nx();
        (b0..=b1).any(|b| (a0..=a1).any(|a| self.covered[b * nx + a]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cell() -> Cell {
        Cell { i0: 0, i1: 1, j0: 0, j1: 1 }
    }

    #[test]
    fn coverage_queries() {
        let k = [0.0, 0.0, 0.25, 0.5, 0.75, 1.0, 1.0];
        let mut d = Domain::empty(&k, &k);
        assert!(d.is_empty());
        assert!(d.insert(unit_cell(), &Rect::new(0.25, 0.75, 0.0, 0.5)));
        assert!(d.contains_rect(&Rect::new(0.25, 0.5, 0.25, 0.5)));
        assert!(d.contains_rect(&Rect::new(0.25, 0.75, 0.0, 0.5)));
        assert!(!d.contains_rect(&Rect::new(0.0, 0.5, 0.0, 0.5)));
        assert!(!d.contains_rect(&Rect::new(0.3, 0.5, 0.0, 0.5)));
        assert!(d.meets_rect(&Rect::new(0.0, 0.5, 0.0, 0.5)));
        assert!(!d.meets_rect(&Rect::new(0.0, 0.25, 0.0, 1.0)));
        assert!(d.contains_point(0.25, 0.5));
        assert!(d.contains_point(0.75, 0.0));
        assert!(d.contains_point(0.5, 0.3));
        assert!(!d.contains_point(0.8, 0.3));
        assert!(!d.contains_point(0.5, 0.75));
        assert!(!d.insert(unit_cell(), &Rect::new(0.1, 0.5, 0.0, 0.5)));
    }
}
