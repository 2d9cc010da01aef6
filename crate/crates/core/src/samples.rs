//! Sample meshes shipped with the crate.
//!
//! The two suitability meshes and the four local index vector meshes are
//! built to have known properties (suitability, index vectors) that the
//! tests compare against. `graded` is a tensor mesh with knots clustered
//! toward one corner.

use crate::basis::{uniform_open, Anchor, GlobalKnots};
use crate::error::{Error, Result};
use crate::tmesh::io::MeshFile;
use crate::tmesh::{Segment, TMesh};

fn carve(m: usize, n: usize, p: usize, q: usize, cuts: &[Segment]) -> TMesh {
    let mut mesh = TMesh::tensor(m, n, p, q).expect("sample sizes are valid");
    for c in cuts {
        mesh.remove_segment(*c);
    }
    mesh.derive_vertices();
    debug_assert!(mesh.validate().is_valid(), "{:?}", mesh.validate());
    mesh
}

/// Bicubic mesh with one horizontal and one vertical T-junction pair whose
/// extensions stay apart.
pub fn suitable_bicubic() -> TMesh {
    carve(16, 16, 3, 3, &[Segment::horizontal(8, 7, 9), Segment::vertical(11, 9, 11)])
}

/// Bicubic mesh where exactly one horizontal face extension meets one
/// vertical extension.
pub fn unsuitable_bicubic() -> TMesh {
    carve(16, 16, 3, 3, &[Segment::horizontal(8, 7, 9), Segment::vertical(6, 9, 11)])
}

/// A local index vector example: mesh, anchor and expected vectors.
#[derive(Debug, Clone)]
pub struct IndexExample {
    pub name: &'static str,
    pub mesh: TMesh,
    pub anchor: Anchor,
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

pub fn index_examples() -> Vec<IndexExample> {
    use Segment as S;
    vec![
        IndexExample {
            name: "a",
            mesh: carve(
                14,
                14,
                2,
                2,
                &[
                    S::vertical(5, 1, 7),
                    S::vertical(6, 1, 7),
                    S::vertical(7, 1, 7),
                    S::horizontal(4, 4, 8),
                    S::horizontal(5, 4, 8),
                    S::horizontal(6, 4, 8),
                    S::vertical(9, 5, 7),
                    S::horizontal(8, 4, 6),
                ],
            ),
            anchor: Anchor { h: (4, 8), v: (3, 7) },
            h: vec![3, 4, 8, 10],
            v: vec![2, 3, 7, 9],
        },
        IndexExample {
            name: "b",
            mesh: carve(
                16,
                14,
                3,
                2,
                &[
                    S::horizontal(8, 8, 11),
                    S::vertical(10, 7, 9),
                    S::vertical(6, 8, 9),
                    S::vertical(7, 8, 9),
                ],
            ),
            anchor: Anchor { h: (9, 9), v: (7, 9) },
            h: vec![5, 8, 9, 11, 12],
            v: vec![6, 7, 9, 10],
        },
        IndexExample {
            name: "c",
            mesh: carve(
                14,
                16,
                2,
                3,
                &[
                    S::vertical(5, 1, 9),
                    S::vertical(6, 1, 9),
                    S::horizontal(5, 4, 7),
                    S::horizontal(6, 4, 7),
                    S::horizontal(7, 4, 7),
                ],
            ),
            anchor: Anchor { h: (4, 7), v: (8, 8) },
            h: vec![3, 4, 7, 8],
            v: vec![3, 4, 8, 9, 10],
        },
        IndexExample {
            name: "d",
            mesh: carve(
                16,
                16,
                3,
                3,
                &[
                    S::vertical(6, 1, 9),
                    S::vertical(7, 1, 9),
                    S::horizontal(5, 5, 9),
                    S::horizontal(6, 5, 9),
                    S::horizontal(7, 5, 9),
                    S::vertical(10, 7, 9),
                ],
            ),
            anchor: Anchor { h: (8, 8), v: (8, 8) },
            h: vec![4, 5, 8, 9, 11],
            v: vec![3, 4, 8, 9, 10],
        },
    ]
}

/// Tensor-product grid with uniform knots.
pub fn tensor(spans: usize, p: usize, q: usize) -> Result<MeshFile> {
    let mesh = TMesh::tensor_spans(spans, spans, p, q)?;
    let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), p, q);
    Ok(MeshFile { mesh, knots: Some(knots) })
}

/// Tensor-product grid whose interior knots are graded toward `s = 1` and
/// `t = 1` with ratio `ratio` between neighbouring spans.
pub fn graded(spans: usize, p: usize, q: usize, ratio: f64) -> Result<MeshFile> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::Config(format!("grading ratio {ratio} must lie in (0, 1]")));
    }
    let mesh = TMesh::tensor_spans(spans, spans, p, q)?;
    let widths: Vec<f64> = (0..spans).map(|k| ratio.powi(k as i32)).collect();
    let total: f64 = widths.iter().sum();
    let mut acc = 0.0;
    let mut breaks = Vec::with_capacity(spans - 1);
    for w in &widths[..spans - 1] {
        acc += w;
        breaks.push(acc / total);
    }
    let open = |deg: usize| {
        let mut k = vec![0.0; deg + 1];
        k.extend(&breaks);
        k.extend(std::iter::repeat(1.0).take(deg + 1));
        k
    };
    let knots = GlobalKnots::new(open(p), open(q));
    debug_assert_eq!(knots.h().len(), uniform_open(mesh.m(), p).len());
    knots.check(p, q)?;
    Ok(MeshFile { mesh, knots: Some(knots) })
}

fn with_uniform_knots(mesh: TMesh) -> MeshFile {
    let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), mesh.p(), mesh.q());
    MeshFile { mesh, knots: Some(knots) }
}

/// Contents of the files under `data/`, by file name.
pub fn shipped() -> Result<Vec<(String, String)>> {
    use crate::hierarchy::{io as hio, HierarchicalSpace};
    use crate::tmesh::io::write;
    let mut out = vec![
        ("suitable_bicubic.tmesh".to_string(), write(&with_uniform_knots(suitable_bicubic()))),
        ("unsuitable_bicubic.tmesh".to_string(), write(&with_uniform_knots(unsuitable_bicubic()))),
    ];
    for ex in index_examples() {
        out.push((format!("index_{}.tmesh", ex.name), write(&MeshFile { mesh: ex.mesh, knots: None })));
    }
    out.push(("one_element_bicubic.tmesh".into(), write(&tensor(1, 3, 3)?)));
    out.push(("tensor8_biquadratic.tmesh".into(), write(&tensor(8, 2, 2)?)));
    out.push(("tensor8_bicubic.tmesh".into(), write(&tensor(8, 3, 3)?)));
    out.push(("graded16_bicubic.tmesh".into(), write(&graded(16, 3, 3, 0.85)?)));
    let base = tensor(4, 2, 2)?;
    let mut space = HierarchicalSpace::new(base.mesh, base.knots.expect("tensor has knots"))?;
    let corner: Vec<usize> = (0..space.n_e()).filter(|&k| space.elements()[k].rect.s1 <= 0.5).collect();
    space.refine_in_place(&corner)?;
    out.push(("two_level_biquadratic.hier".into(), hio::write(&space)));
    Ok(out)
}
