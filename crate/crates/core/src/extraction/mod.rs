//! Bezier extraction of hierarchical spaces: per-element operators,
//! connectivity, weights and control points.

mod bernstein;
pub mod export;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::bspline::bezier_coefficients;
use crate::basis::BlendingFunction;
use crate::error::{Error, Result};
use crate::hierarchy::{HierarchicalSpace, Rect};

pub use bernstein::{bern_index, bernstein, bernstein_all, bernstein_derivatives};

/// Relative singular-value tolerance for the element rank test.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BezierElement {
    pub id: usize,
    pub level: usize,
    pub rect: Rect,
    /// Global indices into `H`, ascending.
    pub ien: Vec<usize>,
    /// `n_loc x n_b`, row `a` holds the Bernstein coefficients of `ien[a]`.
    pub c: DMatrix<f64>,
    pub weights: Vec<f64>,
    pub points: Vec<[f64; 2]>,
}

impl BezierElement {
    pub fn n_loc(&self) -> usize {
        self.ien.len()
    }

    pub fn map_to_parent(&self, s: f64, t: f64) -> (f64, f64) {
        let r = &self.rect;
        ((2.0 * s - r.s0 - r.s1) / (r.s1 - r.s0), (2.0 * t - r.t0 - r.t1) / (r.t1 - r.t0))
    }

    pub fn map_from_parent(&self, xi: f64, eta: f64) -> (f64, f64) {
        let r = &self.rect;
        (0.5 * ((1.0 - xi) * r.s0 + (1.0 + xi) * r.s1), 0.5 * ((1.0 - eta) * r.t0 + (1.0 + eta) * r.t1))
    }

    /// Numerical rank of `C^e`.
    pub fn rank(&self) -> usize {
        if self.c.nrows() == 0 {
            return 0;
        }
        let sv = self.c.clone().svd(false, false).singular_values;
        let top = sv.max();
        sv.iter().filter(|v| **v > RANK_TOL * top).count()
    }

    /// Rows of `C^e` are linearly independent.
    pub fn is_locally_independent(&self) -> bool {
        self.rank() == self.n_loc()
    }
}

/// Bernstein coefficients of a blending function on a rectangle, indexed
/// by `bern_index - 1`.
pub fn function_coefficients(f: &BlendingFunction, rect: &Rect) -> Result<Vec<f64>> {
    let (p, q) = (f.p(), f.q());
    let ch = bezier_coefficients(&f.h_knots, p, rect.s0, rect.s1)?;
    let cv = bezier_coefficients(&f.v_knots, q, rect.t0, rect.t1)?;
    let mut out = vec![0.0; (p + 1) * (q + 1)];
    for (j, b) in cv.iter().enumerate() {
        for (i, a) in ch.iter().enumerate() {
            out[bern_index(p, i + 1, j + 1) - 1] = a * b;
        }
    }
    Ok(out)
}

/// Uniform bucket grid over the unit square for rectangle overlap queries.
struct Buckets {
    k: usize,
    cells: Vec<Vec<usize>>,
}

impl Buckets {
    fn new(k: usize, rects: impl Iterator<Item = Rect>) -> Buckets {
        let mut cells = vec![Vec::new(); k * k];
        let mut b = Buckets { k, cells: Vec::new() };
        for (idx, r) in rects.enumerate() {
            let (a0, a1, b0, b1) = b.range(&r);
            for y in b0..=b1 {
                for x in a0..=a1 {
                    cells[y * k + x].push(idx);
                }
            }
        }
        b.cells = cells;
        b
    }

    fn range(&self, r: &Rect) -> (usize, usize, usize, usize) {
        let k = self.k as f64;
        let clamp = |v: f64| (v * k).floor().clamp(0.0, k - 1.0) as usize;
        (clamp(r.s0), clamp(r.s1), clamp(r.t0), clamp(r.t1))
    }

    fn query(&self, r: &Rect) -> Vec<usize> {
        let (a0, a1, b0, b1) = self.range(r);
        let mut out = Vec::new();
        for y in b0..=b1 {
            for x in a0..=a1 {
                out.extend_from_slice(&self.cells[y * self.k + x]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Per-element arrays of a hierarchical space, in `HE` order.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub p: usize,
    pub q: usize,
    pub n_f: usize,
    pub elements: Vec<BezierElement>,
}

pub fn extract(space: &HierarchicalSpace) -> Result<Extraction> {
    let (p, q) = (space.p(), space.q());
    let k = ((space.n_e() as f64).sqrt().ceil() as usize).clamp(1, 256);
    let hf = Buckets::new(k, space.functions().iter().map(|f| Rect::of_support(&f.func)));
    let gf = Buckets::new(k, space.geometric().iter().map(Rect::of_support));
    let nb = (p + 1) * (q + 1);
    let mut elements = Vec::with_capacity(space.n_e());
    for (id, e) in space.elements().iter().enumerate() {
        let ien: Vec<usize> = hf
            .query(&e.rect)
            .into_iter()
            .filter(|&a| Rect::of_support(&space.functions()[a].func).overlaps(&e.rect))
            .collect();
        let mut c = DMatrix::zeros(ien.len(), nb);
        for (row, &a) in ien.iter().enumerate() {
            let coef = function_coefficients(&space.functions()[a].func, &e.rect)?;
            for (b, v) in coef.into_iter().enumerate() {
                c[(row, b)] = v;
            }
        }
        let mut weights = vec![0.0; nb];
        let mut num = vec![[0.0; 2]; nb];
        for g in gf.query(&e.rect) {
            let func = &space.geometric()[g];
            if !Rect::of_support(func).overlaps(&e.rect) {
                continue;
            }
            let (w, pt) = (space.weights()[g], space.control_points()[g]);
            for (b, v) in function_coefficients(func, &e.rect)?.into_iter().enumerate() {
                weights[b] += w * v;
                num[b][0] += pt[0] * w * v;
                num[b][1] += pt[1] * w * v;
            }
        }
        let mut points = Vec::with_capacity(nb);
        for b in 0..nb {
            if weights[b] <= 0.0 {
                return Err(Error::NonPositiveWeight { value: weights[b], location: format!("element {id}, Bezier point {b}") });
            }
            points.push([num[b][0] / weights[b], num[b][1] / weights[b]]);
        }
        elements.push(BezierElement { id, level: e.level, rect: e.rect, ien, c, weights, points });
    }
    Ok(Extraction { p, q, n_f: space.n_f(), elements })
}

impl Extraction {
    pub fn n_e(&self) -> usize {
        self.elements.len()
    }

    /// Elements whose operator is rank deficient.
    pub fn dependent_elements(&self) -> Vec<usize> {
        self.elements.iter().filter(|e| !e.is_locally_independent()).map(|e| e.id).collect()
    }

    /// Rank of the functions of `H` as a whole, from the Gram matrix of
    /// their stacked Bernstein coefficients. On each element the Bernstein
    /// polynomials are a basis, so this equals the rank of `H` evaluated on
    /// a unisolvent point set per element.
    pub fn global_rank(&self) -> usize {
        let n = self.n_f;
        let mut g = DMatrix::<f64>::zeros(n, n);
        for e in &self.elements {
            let cc = &e.c * e.c.transpose();
            for (a, &ga) in e.ien.iter().enumerate() {
                for (b, &gb) in e.ien.iter().enumerate() {
                    g[(ga, gb)] += cc[(a, b)];
                }
            }
        }
        let eig = SymmetricEigen::new(g).eigenvalues;
        let top = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        eig.iter().filter(|v| **v > 1e-12 * top).count()
    }
}

/// Bernstein coefficients of `H` functions on a rectangle for a
/// single-level function set (no hierarchy), used with non-suitable meshes.
pub fn extract_functions(funcs: &[BlendingFunction], rects: &[Rect]) -> Result<Vec<BezierElement>> {
    let Some(first) = funcs.first() else { return Ok(Vec::new()) };
    let nb = (first.p() + 1) * (first.q() + 1);
    let mut out = Vec::with_capacity(rects.len());
    for (id, r) in rects.iter().enumerate() {
        let ien: Vec<usize> = (0..funcs.len()).filter(|&a| Rect::of_support(&funcs[a]).overlaps(r)).collect();
        let mut c = DMatrix::zeros(ien.len(), nb);
        for (row, &a) in ien.iter().enumerate() {
            for (b, v) in function_coefficients(&funcs[a], r)?.into_iter().enumerate() {
                c[(row, b)] = v;
            }
        }
        out.push(BezierElement { id, level: 1, rect: *r, ien, c, weights: vec![1.0; nb], points: Vec::new() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::GlobalKnots;
    use crate::tmesh::random::{random_mesh, RandomMeshSpec};
    use crate::tmesh::TMesh;

    fn space_on(mesh: TMesh) -> HierarchicalSpace {
        let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), mesh.p(), mesh.q());
        HierarchicalSpace::new(mesh, knots).unwrap()
    }

    fn random_space(p: usize, q: usize, seed: u64) -> HierarchicalSpace {
        let spec = RandomMeshSpec { spans_x: 5, spans_y: 6, p, q, removals: 30, analysis_suitable: true };
        space_on(random_mesh(spec, seed).unwrap())
    }

    fn eval_bernstein(ex: &Extraction, e: &BezierElement, xi: f64, eta: f64) -> Vec<f64> {
        let bx = bernstein_all(ex.p, xi);
        let by = bernstein_all(ex.q, eta);
        let mut b = Vec::new();
        for y in &by {
            for x in &bx {
                b.push(x * y);
            }
        }
        (0..e.n_loc()).map(|a| (0..b.len()).map(|k| e.c[(a, k)] * b[k]).sum()).collect()
    }

    #[test]
    fn one_element_patch_is_identity() {
        let space = space_on(TMesh::tensor_spans(1, 1, 3, 3).unwrap());
        let ex = extract(&space).unwrap();
        assert_eq!(ex.n_e(), 1);
        let e = &ex.elements[0];
        assert_eq!(e.n_loc(), 16);
        assert_eq!(e.c, DMatrix::identity(16, 16));
        assert!(e.weights.iter().all(|w| *w == 1.0));
        for j in 0..4 {
            for i in 0..4 {
                let pt = e.points[bern_index(3, i + 1, j + 1) - 1];
                assert!((pt[0] - i as f64 / 3.0).abs() < 1e-15 && (pt[1] - j as f64 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tensor_rows_have_full_support_count() {
        let space = space_on(TMesh::tensor_spans(4, 3, 2, 3).unwrap());
        let ex = extract(&space).unwrap();
        assert!(ex.elements.iter().all(|e| e.n_loc() == 12));
        assert!(ex.dependent_elements().is_empty());
    }

    #[test]
    fn operators_reproduce_functions_and_partition_unity() {
        for (p, q) in [(3, 3), (2, 2), (3, 2), (2, 3)] {
            let space = random_space(p, q, 5);
            let ex = extract(&space).unwrap();
            for e in &ex.elements {
                for b in 0..e.c.ncols() {
                    let col: f64 = e.c.column(b).sum();
                    assert!((col - 1.0).abs() < 1e-12);
                }
                for (xi, eta) in [(-0.77, 0.31), (0.0, 0.0), (0.5, -0.9)] {
                    let (s, t) = e.map_from_parent(xi, eta);
                    let vals = eval_bernstein(&ex, e, xi, eta);
                    for (a, &glob) in e.ien.iter().enumerate() {
                        let direct = space.functions()[glob].func.eval(s, t);
                        assert!((vals[a] - direct).abs() < 1e-12);
                    }
                }
                assert!(e.is_locally_independent());
            }
            assert_eq!(ex.global_rank(), ex.n_f);
        }
    }

    #[test]
    fn ien_lists_exactly_the_nonzero_functions() {
        let mut space = random_space(3, 3, 2);
        space.refine_in_place(&[7, 8, 12, 13]).unwrap();
        space.refine_in_place(&[space.n_e() - 1]).unwrap();
        let ex = extract(&space).unwrap();
        for e in &ex.elements {
            let (s, t) = e.map_from_parent(0.123, -0.456);
            let brute: Vec<usize> =
                (0..space.n_f()).filter(|&a| space.functions()[a].func.eval(s, t) > 0.0).collect();
            assert_eq!(brute, e.ien);
            assert!(e.is_locally_independent());
        }
        assert_eq!(ex.global_rank(), ex.n_f);
    }

    #[test]
    fn geometry_matches_direct_evaluation() {
        let mut space = random_space(2, 3, 9);
        let n = space.geometric().len();
        let pts: Vec<[f64; 2]> = space
            .control_points()
            .iter()
            .enumerate()
            .map(|(k, p)| [p[0] + 0.01 * (k % 5) as f64, p[1] * p[1]])
            .collect();
        let ws: Vec<f64> = (0..n).map(|k| 1.0 + 0.2 * ((k * 7) % 3) as f64).collect();
        space.set_geometry(pts.clone(), ws.clone()).unwrap();
        space.refine_in_place(&[3, 4]).unwrap();
        let ex = extract(&space).unwrap();
        for e in &ex.elements {
            for (xi, eta) in [(-0.5, 0.5), (0.3, 0.9)] {
                let (s, t) = e.map_from_parent(xi, eta);
                let bx = bernstein_all(ex.p, xi);
                let by = bernstein_all(ex.q, eta);
                let (mut w, mut x, mut y) = (0.0, 0.0, 0.0);
                for (j, vy) in by.iter().enumerate() {
                    for (i, vx) in bx.iter().enumerate() {
                        let b = bern_index(ex.p, i + 1, j + 1) - 1;
                        let bb = vx * vy;
                        w += e.weights[b] * bb;
                        x += e.points[b][0] * e.weights[b] * bb;
                        y += e.points[b][1] * e.weights[b] * bb;
                    }
                }
                let (mut wd, mut xd, mut yd) = (0.0, 0.0, 0.0);
                for (g, f) in space.geometric().iter().enumerate() {
                    let v = f.eval(s, t) * ws[g];
                    wd += v;
                    xd += pts[g][0] * v;
                    yd += pts[g][1] * v;
                }
                assert!((w - wd).abs() < 1e-12);
                assert!((x / w - xd / wd).abs() < 1e-12 && (y / w - yd / wd).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_geometry_is_exact() {
        let space = random_space(3, 3, 4);
        let ex = extract(&space).unwrap();
        for e in &ex.elements {
            for (b, pt) in e.points.iter().enumerate() {
                let (i, j) = (b % 4, b / 4);
                let (s, t) = e.map_from_parent(-1.0 + 2.0 * i as f64 / 3.0, -1.0 + 2.0 * j as f64 / 3.0);
                assert!((pt[0] - s).abs() < 1e-13 && (pt[1] - t).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn export_is_deterministic() {
        let space = random_space(2, 2, 1);
        let a = export::write(&extract(&space).unwrap());
        let b = export::write(&extract(&space).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("extraction 2 2 "));
    }
}
