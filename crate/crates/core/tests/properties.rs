mod common;

use common::uniform;
use hasts::extraction::extract;
use hasts::hierarchy::HierarchicalSpace;
use hasts::tmesh::random::{random_mesh, RandomMeshSpec};
use proptest::prelude::*;

fn random_space(p: usize, q: usize, seed: u64) -> HierarchicalSpace {
    let spec = RandomMeshSpec { spans_x: 5, spans_y: 5, p, q, removals: 30, analysis_suitable: true };
    let file = uniform(random_mesh(spec, seed).unwrap());
    HierarchicalSpace::new(file.mesh, file.knots.unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_suitable_meshes_sum_to_one(p in 2usize..=3, q in 2usize..=3, seed in 0u64..1000, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let sp = random_space(p, q, seed);
        let sum: f64 = sp.functions().iter().map(|f| f.func.eval(s, t)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {}", sum);
    }

    #[test]
    fn single_level_extraction_has_full_rank(p in 2usize..=3, q in 2usize..=3, seed in 0u64..1000) {
        let ex = extract(&random_space(p, q, seed)).unwrap();
        prop_assert!(ex.dependent_elements().is_empty());
    }
}
