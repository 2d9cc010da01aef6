#![allow(dead_code)]

use hasts::basis::GlobalKnots;
use hasts::hierarchy::{HierarchicalSpace, Rect};
use hasts::samples;
use hasts::tmesh::io::MeshFile;
use hasts::tmesh::random::{random_mesh, RandomMeshSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Degree pairs covering all four anchor parities.
pub const DEGREES: [(usize, usize); 4] = [(2, 2), (3, 3), (2, 3), (3, 2)];

pub fn uniform(mesh: hasts::tmesh::TMesh) -> MeshFile {
    let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), mesh.p(), mesh.q());
    MeshFile { mesh, knots: Some(knots) }
}

/// Single-level analysis-suitable meshes: tensor grids, seeded random
/// T-meshes for every parity, and the shipped suitable sample.
pub fn suitable_meshes() -> Vec<(String, MeshFile)> {
    let mut out = Vec::new();
    for (p, q) in DEGREES {
        out.push((format!("tensor p{p} q{q}"), samples::tensor(4, p, q).unwrap()));
    }
    for (k, (p, q)) in DEGREES.iter().enumerate() {
        for seed in [1u64, 2] {
            let spec = RandomMeshSpec { spans_x: 7, spans_y: 6, p: *p, q: *q, removals: 60, analysis_suitable: true };
            let mesh = random_mesh(spec, seed + 10 * k as u64).unwrap();
            assert!(!mesh.t_junctions().is_empty());
            out.push((format!("random p{p} q{q} seed {seed}"), uniform(mesh)));
        }
    }
    out.push(("suitable bicubic sample".into(), uniform(samples::suitable_bicubic())));
    out.push(("graded bicubic".into(), samples::graded(6, 3, 3, 0.7).unwrap()));
    out
}

pub fn space(file: &MeshFile) -> HierarchicalSpace {
    HierarchicalSpace::new(file.mesh.clone(), file.knots.clone().unwrap()).unwrap()
}

/// Refines a random fraction of the elements below `max_level`, `steps`
/// times. Returns every intermediate space, starting with `start`.
pub fn random_refinements(start: HierarchicalSpace, steps: usize, fraction: f64, max_level: usize, seed: u64) -> Vec<HierarchicalSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![start];
    for _ in 0..steps {
        let cur = out.last().unwrap();
        let marked: Vec<usize> = (0..cur.n_e())
            .filter(|&k| cur.elements()[k].level < max_level)
            .filter(|_| rng.gen_bool(fraction))
            .collect();
        out.push(cur.refine_by_elements(&marked).unwrap());
    }
    out
}

/// Multi-level hierarchies of depth up to four with at most 2000 elements.
pub fn hierarchies() -> Vec<(String, HierarchicalSpace)> {
    let mut out = Vec::new();
    for (k, (p, q)) in [(2, 2), (3, 3), (2, 3)].into_iter().enumerate() {
        let spec = RandomMeshSpec { spans_x: 6, spans_y: 6, p, q, removals: 40, analysis_suitable: true };
        let base = space(&uniform(random_mesh(spec, 100 + k as u64).unwrap()));
        let chain = random_refinements(base, 3, 0.3, 4, 7 + k as u64);
        let last = chain.into_iter().last().unwrap();
        assert!(last.n_e() <= 2000);
        out.push((format!("hierarchy p{p} q{q} depth {}", last.depth()), last));
    }
    out
}

fn point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0) };
    ((p[0] - a[0] - t * d[0]).powi(2) + (p[1] - a[1] - t * d[1]).powi(2)).sqrt()
}

fn point_rect(p: [f64; 2], r: &Rect) -> f64 {
    let dx = (r.s0 - p[0]).max(0.0).max(p[0] - r.s1);
    let dy = (r.t0 - p[1]).max(0.0).max(p[1] - r.t1);
    (dx * dx + dy * dy).sqrt()
}

/// Liang-Barsky clip of the segment against the closed rectangle.
fn segment_meets_rect(a: [f64; 2], b: [f64; 2], r: &Rect) -> bool {
    let d = [b[0] - a[0], b[1] - a[1]];
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (pk, qk) in [(-d[0], a[0] - r.s0), (d[0], r.s1 - a[0]), (-d[1], a[1] - r.t0), (d[1], r.t1 - a[1])] {
        if pk == 0.0 {
            if qk < 0.0 {
                return false;
            }
        } else {
            let t = qk / pk;
            if pk < 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
        }
    }
    lo <= hi
}

/// Euclidean distance between a closed rectangle and a segment.
pub fn rect_segment(r: &Rect, a: [f64; 2], b: [f64; 2]) -> f64 {
    if segment_meets_rect(a, b, r) {
        return 0.0;
    }
    let corners = [[r.s0, r.t0], [r.s1, r.t0], [r.s0, r.t1], [r.s1, r.t1]];
    let from_corners = corners.iter().map(|c| point_segment(*c, a, b)).fold(f64::MAX, f64::min);
    from_corners.min(point_rect(a, r)).min(point_rect(b, r))
}

pub fn point_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    point_segment(p, a, b)
}
