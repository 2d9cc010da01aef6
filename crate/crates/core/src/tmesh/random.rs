//! Seeded generator of random valid T-meshes, used by tests and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Axis, TMesh};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct RandomMeshSpec {
    pub spans_x: usize,
    pub spans_y: usize,
    pub p: usize,
    pub q: usize,
    /// Number of edge removals attempted.
    pub removals: usize,
    pub analysis_suitable: bool,
}

/// Starts from a tensor grid and deletes random interior edges, keeping
/// only deletions that leave a valid (and optionally suitable) mesh.
pub fn random_mesh(spec: RandomMeshSpec, seed: u64) -> Result<TMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mesh = TMesh::tensor_spans(spec.spans_x, spec.spans_y, spec.p, spec.q)?;
    let (m, n, p, q) = (mesh.m(), mesh.n(), spec.p, spec.q);
    for _ in 0..spec.removals {
        let candidates: Vec<_> = mesh
            .edges()
            .into_iter()
            .filter(|e| match e.axis {
                Axis::Horizontal => e.line > q + 1 && e.line < n - q,
                Axis::Vertical => e.line > p + 1 && e.line < m - p,
            })
            .collect();
        let Some(edge) = candidates.choose(&mut rng).copied() else { break };
        let mut trial = mesh.clone();
        trial.remove_segment(edge);
        trial.derive_vertices();
        if trial.validate().is_valid() && (!spec.analysis_suitable || trial.is_analysis_suitable()) {
            mesh = trial;
        }
        // keep the stream position independent of acceptance
        let _: u32 = rng.gen();
    }
    Ok(mesh)
}
