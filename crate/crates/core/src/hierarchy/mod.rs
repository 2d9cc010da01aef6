//! Nested analysis-suitable T-mesh sequences and the hierarchical basis.
//!
//! Levels are global meshes built lazily from their parent and never depend
//! on marking; refinement only grows the nested domains, after which the
//! basis `H` and element set `HE` are re-selected.

mod domain;
pub mod io;
mod level;
mod represent;

use std::collections::HashMap;

use crate::basis::{local_index_vectors, Anchor, BlendingFunction, GlobalKnots};
use crate::error::{Error, Result};
use crate::tmesh::{Cell, TMesh};

pub use domain::Domain;
pub use level::{make_analysis_suitable, subdivide, Level};
pub use represent::{refinement_coefficients, represent_coarse_in_fine};

pub const DEFAULT_MAX_LEVELS: usize = 8;

/// Closed parametric rectangle `[s0, s1] x [t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub s0: f64,
    pub s1: f64,
    pub t0: f64,
    pub t1: f64,
}

impl Rect {
    pub fn new(s0: f64, s1: f64, t0: f64, t1: f64) -> Rect {
        Rect { s0, s1, t0, t1 }
    }

    pub fn area(&self) -> f64 {
        (self.s1 - self.s0) * (self.t1 - self.t0)
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.s0 + self.s1), 0.5 * (self.t0 + self.t1))
    }

    pub fn contains(&self, other: &Rect) -> bool {
        self.s0 <= other.s0 && other.s1 <= self.s1 && self.t0 <= other.t0 && other.t1 <= self.t1
    }

    pub fn contains_point(&self, s: f64, t: f64) -> bool {
        self.s0 <= s && s <= self.s1 && self.t0 <= t && t <= self.t1
    }

    /// Interiors intersect.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.s0.max(other.s0) < self.s1.min(other.s1) && self.t0.max(other.t0) < self.t1.min(other.t1)
    }

    pub fn of_support(f: &BlendingFunction) -> Rect {
        let [s0, s1, t0, t1] = f.support();
        Rect { s0, s1, t0, t1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub level: usize,
    pub cell: Cell,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HFunction {
    pub level: usize,
    pub func: BlendingFunction,
}

#[derive(Debug, Clone)]
pub struct HierarchicalSpace {
    levels: Vec<Level>,
    /// `domains[k]` is the domain of level `k + 1`; level 1 is the whole
    /// parametric square.
    domains: Vec<Domain>,
    max_levels: usize,
    functions: Vec<HFunction>,
    lookup: HashMap<(usize, Anchor), usize>,
    elements: Vec<Element>,
    geometric: Vec<BlendingFunction>,
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl HierarchicalSpace {
    /// Single-level space on an analysis-suitable mesh, with the identity
    /// geometry (Greville control points, unit weights).
    pub fn new(mesh: TMesh, knots: GlobalKnots) -> Result<Self> {
        let level = Level::new(1, mesh, knots, Vec::new(), Vec::new())?;
        let geometric = crate::basis::build_functions(&level.mesh, &level.knots, level.anchors.clone())?;
        let points = geometric
            .iter()
            .map(|f| {
                let (s, t) = f.greville();
                [s, t]
            })
            .collect();
        let weights = vec![1.0; geometric.len()];
        let domain = Domain::full(level.knots.h(), level.knots.v());
        let mut space = HierarchicalSpace {
            levels: vec![level],
            domains: vec![domain],
            max_levels: DEFAULT_MAX_LEVELS,
            functions: Vec::new(),
            lookup: HashMap::new(),
            elements: Vec::new(),
            geometric,
            points,
            weights,
        };
        space.rebuild()?;
        Ok(space)
    }

    pub fn with_max_levels(mut self, max_levels: usize) -> Self {
        self.max_levels = max_levels.max(1);
        self
    }

    pub fn set_geometry(&mut self, points: Vec<[f64; 2]>, weights: Vec<f64>) -> Result<()> {
        if points.len() != self.geometric.len() || weights.len() != self.geometric.len() {
            return Err(Error::Incompatible(format!(
                "{} geometric functions, {} points, {} weights",
                self.geometric.len(),
                points.len(),
                weights.len()
            )));
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| **w <= 0.0) {
            return Err(Error::NonPositiveWeight { value: *w, location: format!("control point {k}") });
        }
        self.points = points;
        self.weights = weights;
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.levels[0].mesh.p()
    }

    pub fn q(&self) -> usize {
        self.levels[0].mesh.q()
    }

    pub fn max_levels(&self) -> usize {
        self.max_levels
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level `alpha` (1-based).
    pub fn level(&self, alpha: usize) -> &Level {
        &self.levels[alpha - 1]
    }

    pub fn domain(&self, alpha: usize) -> &Domain {
        &self.domains[alpha - 1]
    }

    /// Number of levels whose domain is not empty.
    pub fn depth(&self) -> usize {
        1 + self.domains[1..].iter().take_while(|d| !d.is_empty()).count()
    }

    pub fn functions(&self) -> &[HFunction] {
        &self.functions
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn n_f(&self) -> usize {
        self.functions.len()
    }

    pub fn n_e(&self) -> usize {
        self.elements.len()
    }

    /// Index in `H` of the level-`alpha` function anchored at `anchor`.
    pub fn find(&self, alpha: usize, anchor: &Anchor) -> Option<usize> {
        self.lookup.get(&(alpha, *anchor)).copied()
    }

    pub fn geometric(&self) -> &[BlendingFunction] {
        &self.geometric
    }

    pub fn control_points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Makes sure level `alpha` exists.
    pub fn ensure_level(&mut self, alpha: usize) -> Result<()> {
        if alpha > self.max_levels {
            return Err(Error::TooManyLevels(self.max_levels));
        }
        while self.levels.len() < alpha {
            let next = self.levels.last().unwrap().refine()?;
            self.domains.push(Domain::empty(next.knots.h(), next.knots.v()));
            self.levels.push(next);
        }
        Ok(())
    }

    /// Blending function of level `alpha` at `anchor`.
    pub fn function_at(&self, alpha: usize, anchor: Anchor) -> Result<BlendingFunction> {
        let lvl = self.level(alpha);
        let (h, v) = local_index_vectors(&lvl.mesh, &anchor)?;
        Ok(BlendingFunction::new(anchor, h, v, &lvl.knots))
    }

    /// All blending functions of level `alpha`.
    pub fn level_functions(&self, alpha: usize) -> Result<Vec<BlendingFunction>> {
        let lvl = self.level(alpha);
        crate::basis::build_functions(&lvl.mesh, &lvl.knots, lvl.anchors.clone())
    }

    fn anchor_point(lvl: &Level, a: &Anchor) -> (f64, f64) {
        let k = &lvl.knots;
        (0.5 * (k.s(a.h.0) + k.s(a.h.1)), 0.5 * (k.t(a.v.0) + k.t(a.v.1)))
    }

    /// Re-selects `H` and `HE` from the current levels and domains.
    fn rebuild(&mut self) -> Result<()> {
        let mut functions = Vec::new();
        let mut elements = Vec::new();
        for (k, lvl) in self.levels.iter().enumerate() {
            let alpha = k + 1;
            let dom = &self.domains[k];
            if alpha > 1 && dom.is_empty() {
                break;
            }
            let next = self.domains.get(k + 1).filter(|d| !d.is_empty());
            for a in &lvl.anchors {
                if alpha > 1 {
                    let (s, t) = Self::anchor_point(lvl, a);
                    if !dom.contains_point(s, t) {
                        continue;
                    }
                }
                let (h, v) = local_index_vectors(&lvl.mesh, a)?;
                let f = BlendingFunction::new(*a, h, v, &lvl.knots);
                let r = Rect::of_support(&f);
                if alpha > 1 && !dom.contains_rect(&r) {
                    continue;
                }
                if next.is_some_and(|d| d.contains_rect(&r)) {
                    continue;
                }
                functions.push(HFunction { level: alpha, func: f });
            }
            for (cell, rect) in &lvl.elements {
                if alpha > 1 && !dom.contains_rect(rect) {
                    continue;
                }
                if next.is_some_and(|d| d.contains_rect(rect)) {
                    continue;
                }
                elements.push(Element { level: alpha, cell: *cell, rect: *rect });
            }
        }
        self.lookup = functions.iter().enumerate().map(|(k, f)| ((f.level, f.func.anchor), k)).collect();
        self.functions = functions;
        self.elements = elements;
        Ok(())
    }

    /// Adds the closure of a level-`alpha` element to the domain of level
    /// `alpha + 1`, creating that level if needed. Does not rebuild.
    fn grow_domain(&mut self, alpha: usize, cell: Cell, rect: Rect) -> Result<()> {
        self.ensure_level(alpha + 1)?;
        if alpha > 1 && !self.domains[alpha - 1].contains_rect(&rect) {
            return Err(Error::BadDomain { level: alpha + 1 });
        }
        if !self.domains[alpha].insert(cell, &rect) {
            return Err(Error::BadDomain { level: alpha + 1 });
        }
        Ok(())
    }

    /// Sets the domain of level `alpha + 1` to the union of `rects`, each of
    /// which must be a union of level-`alpha` elements inside the domain of
    /// level `alpha`.
    pub fn set_domain(&mut self, alpha: usize, rects: &[Rect]) -> Result<()> {
        self.ensure_level(alpha + 1)?;
        let lvl = &self.levels[alpha - 1];
        let mut parts = Vec::new();
        for r in rects {
            let inside: Vec<_> = lvl.elements.iter().filter(|(_, e)| r.contains(e)).copied().collect();
            let area: f64 = inside.iter().map(|(_, e)| e.area()).sum();
            if inside.is_empty() || (area - r.area()).abs() > 1e-14 * r.area().max(1e-300) {
                return Err(Error::BadDomain { level: alpha + 1 });
            }
            parts.extend(inside);
        }
        let k = &self.levels[alpha].knots;
        self.domains[alpha] = Domain::empty(k.h(), k.v());
        for (cell, rect) in parts {
            self.grow_domain(alpha, cell, rect)?;
        }
        self.rebuild()
    }

    /// Refines the marked elements of `HE` (indices into `elements()`).
    pub fn refine_in_place(&mut self, marked: &[usize]) -> Result<()> {
        if marked.is_empty() {
            return Ok(());
        }
        let chosen: Vec<Element> = marked.iter().map(|&k| self.elements[k].clone()).collect();
        if let Some(e) = chosen.iter().find(|e| e.level >= self.max_levels) {
            return Err(Error::TooManyLevels(e.level.max(self.max_levels)));
        }
        for e in chosen {
            self.grow_domain(e.level, e.cell, e.rect)?;
        }
        self.rebuild()
    }

    pub fn refine_by_elements(&self, marked: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.refine_in_place(marked)?;
        Ok(out)
    }

    /// Uniform refinement of every element of `HE`.
    pub fn refine_all(&mut self) -> Result<()> {
        let all: Vec<usize> = (0..self.n_e()).collect();
        self.refine_in_place(&all)
    }

    /// Coefficients over `H` of a blending function of level `alpha`,
    /// expanding through finer levels wherever the function was replaced.
    pub fn represent_in_h(&self, alpha: usize, f: &BlendingFunction) -> Result<Vec<(usize, f64)>> {
        let mut acc: HashMap<usize, f64> = HashMap::new();
        self.accumulate(alpha, f, 1.0, &mut acc)?;
        let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0.0).collect();
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
    }

    fn accumulate(&self, alpha: usize, f: &BlendingFunction, scale: f64, acc: &mut HashMap<usize, f64>) -> Result<()> {
        if let Some(k) = self.find(alpha, &f.anchor) {
            *acc.entry(k).or_insert(0.0) += scale;
            return Ok(());
        }
        let replaced = alpha < self.levels.len()
            && !self.domains[alpha].is_empty()
            && self.domains[alpha].contains_rect(&Rect::of_support(f));
        if !replaced {
            return Err(Error::Incompatible(format!("level {alpha} function at {} is not in the span of H", f.anchor)));
        }
        for (g, c) in represent_coarse_in_fine(f, &self.levels[alpha])? {
            self.accumulate(alpha + 1, &g, scale * c, acc)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmesh::random::{random_mesh, RandomMeshSpec};

    fn tensor_space(spans: usize, p: usize, q: usize) -> HierarchicalSpace {
        let mesh = TMesh::tensor_spans(spans, spans, p, q).unwrap();
        let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), p, q);
        HierarchicalSpace::new(mesh, knots).unwrap()
    }

    fn random_space(p: usize, q: usize, seed: u64) -> HierarchicalSpace {
        let spec = RandomMeshSpec { spans_x: 6, spans_y: 6, p, q, removals: 40, analysis_suitable: true };
        let mesh = random_mesh(spec, seed).unwrap();
        let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), p, q);
        HierarchicalSpace::new(mesh, knots).unwrap()
    }

    fn tiled_area(space: &HierarchicalSpace) -> f64 {
        space.elements().iter().map(|e| e.rect.area()).sum()
    }

    #[test]
    fn single_level_is_the_mesh_basis() {
        let space = tensor_space(3, 3, 3);
        assert_eq!(space.n_f(), 36);
        assert_eq!(space.n_e(), 9);
        assert_eq!(space.depth(), 1);
    }

    #[test]
    fn one_element_patch_subdivides_into_four() {
        let mut space = tensor_space(1, 3, 3);
        space.ensure_level(2).unwrap();
        let l2 = space.level(2);
        assert_eq!(l2.elements.len(), 4);
        assert!(l2.knots.h().contains(&0.5) && l2.knots.v().contains(&0.5));
        assert_eq!(l2.mesh.m(), 9);
    }

    #[test]
    fn uniform_refinement_gives_next_level_basis() {
        for (p, q) in [(2, 2), (3, 3), (2, 3)] {
            let mut space = tensor_space(3, p, q);
            space.refine_all().unwrap();
            let n2 = space.level_functions(2).unwrap();
            assert_eq!(space.n_f(), n2.len());
            assert!(space.functions().iter().all(|f| f.level == 2));
            assert_eq!(space.n_e(), 36);
            assert_eq!(space.level(2).elements.len(), 36);
        }
    }

    #[test]
    fn marking_one_element_adds_three() {
        let mut space = tensor_space(2, 3, 3);
        let before = space.n_e();
        space.refine_in_place(&[0]).unwrap();
        assert_eq!(space.n_e(), before + 3);
        assert!((tiled_area(&space) - 1.0).abs() < 1e-14);
        assert!(space.refine_in_place(&[]).is_ok());
    }

    #[test]
    fn levels_are_nested_and_suitable_on_random_meshes() {
        for seed in 0..6 {
            for (p, q) in [(3, 3), (2, 2), (3, 2)] {
                let mut space = random_space(p, q, seed);
                space.ensure_level(3).unwrap();
                for alpha in 1..3 {
                    let (a, b) = (space.level(alpha), space.level(alpha + 1));
                    assert!(b.mesh.is_analysis_suitable());
                    assert!(b.mesh.overlapping_extensions().is_empty());
                    assert!(a.ext.included_in_mapped(&b.ext, &b.h_map, &b.v_map).unwrap());
                }
            }
        }
    }

    #[test]
    fn coarse_functions_are_reproduced_on_the_next_level() {
        for seed in 0..4 {
            for (p, q) in [(3, 3), (2, 2), (2, 3)] {
                let mut space = random_space(p, q, seed);
                space.ensure_level(2).unwrap();
                for f in space.geometric().to_vec() {
                    let terms = represent_coarse_in_fine(&f, space.level(2)).unwrap();
                    for (g, c) in &terms {
                        assert!((refinement_coefficients(&f, g) - c).abs() < 1e-12, "fell back to least squares");
                    }
                }
            }
        }
    }

    #[test]
    fn local_refinement_keeps_tiling_and_representation() {
        let mut space = random_space(3, 3, 11);
        for round in 0..3 {
            let centre: Vec<usize> = space
                .elements()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.rect.overlaps(&Rect::new(0.3, 0.6, 0.35, 0.55)))
                .map(|(k, _)| k)
                .collect();
            space.refine_in_place(&centre).unwrap();
            assert!((tiled_area(&space) - 1.0).abs() < 1e-14, "round {round}");
        }
        assert_eq!(space.depth(), 4);
        for f in space.geometric().to_vec() {
            let terms = space.represent_in_h(1, &f).unwrap();
            for (s, t) in represent::sample_points(&Rect::of_support(&f), 6) {
                let sum: f64 = terms.iter().map(|(k, c)| c * space.functions()[*k].func.eval(s, t)).sum();
                assert!((sum - f.eval(s, t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn max_levels_is_enforced() {
        let mut space = tensor_space(1, 2, 2).with_max_levels(2);
        space.refine_in_place(&[0]).unwrap();
        assert!(matches!(space.refine_in_place(&[0]), Err(Error::TooManyLevels(_))));
    }

    #[test]
    fn domains_must_be_unions_of_elements() {
        let mut space = tensor_space(4, 2, 2);
        assert!(space.set_domain(1, &[Rect::new(0.25, 0.75, 0.0, 0.5)]).is_ok());
        assert_eq!(space.depth(), 2);
        assert!(matches!(space.set_domain(1, &[Rect::new(0.3, 0.75, 0.0, 0.5)]), Err(Error::BadDomain { .. })));
    }
}
