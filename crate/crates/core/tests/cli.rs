use std::path::PathBuf;

use hasts::cli::{run, EXIT_DOMAIN, EXIT_INPUT, EXIT_OK};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["hasts"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) = call(&["validate", "--mesh", &data("suitable_bicubic.tmesh")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("analysis-suitable yes"));

    let (code, out, _) = call(&["validate", "--mesh", &data("unsuitable_bicubic.tmesh")]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(out.contains("offending-pairs 1\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("pair ")).count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("tensor8_bicubic.tmesh")).unwrap();
    let cut = dir.path().join("cut.tmesh");
    std::fs::write(&cut, &text[..text.len() / 3]).unwrap();
    let (code, _, err) = call(&["validate", "--mesh", cut.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line"), "{err}");

    let (code, _, _) = call(&["validate", "--mesh", "/nonexistent/mesh.tmesh"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = call(&["validate", "--bogus"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn random_meshes_follow_the_seed() {
    let a = call(&["validate", "--seed", "11", "--spans", "5"]);
    let b = call(&["validate", "--seed", "11", "--spans", "5"]);
    assert_eq!(a, b);
    assert_eq!(a.0, EXIT_OK);
}

#[test]
fn extract_one_element_and_determinism() {
    let (code, out, _) = call(&["extract", "--mesh", &data("one_element_bicubic.tmesh")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("extraction 3 3 16 1\n"));
    assert!(out.ends_with("n_f 16 n_e 1\n"));

    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    let h = data("two_level_biquadratic.hier");
    let (c1, s1, _) = call(&["extract", "--mesh", &h, "--out", d1.to_str().unwrap()]);
    let (c2, _, _) = call(&["extract", "--mesh", &h, "--out", d2.to_str().unwrap()]);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    let f1 = std::fs::read(d1.join("extraction.txt")).unwrap();
    assert_eq!(f1, std::fs::read(d2.join("extraction.txt")).unwrap());

    let space = hasts::hierarchy::io::parse(&std::fs::read_to_string(&h).unwrap()).unwrap();
    assert_eq!(s1.trim(), format!("n_f {} n_e {}", space.n_f(), space.n_e()));
}

#[test]
fn extract_rejects_unsuitable_mesh() {
    let (code, _, err) = call(&["extract", "--mesh", &data("unsuitable_bicubic.tmesh")]);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
}

#[test]
fn refine_writes_a_loadable_hierarchy() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) =
        call(&["refine", "--mesh", &data("tensor8_biquadratic.tmesh"), "--mark", "0,9", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("levels 2 "));
    let back = call(&["extract", "--mesh", dir.path().join("hierarchy.txt").to_str().unwrap()]);
    assert_eq!(back.0, EXIT_OK);
    let (code, _, _) = call(&["refine", "--mesh", &data("tensor8_biquadratic.tmesh"), "--mark", "9999"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn solve_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["solve", "--benchmark", "manufactured", "--p", "2", "--q", "2", "--spans", "4", "--iterations", "3"];
    let (code, out, err) = call(&[&args[..], &["--tol", "1e-5", "--grid", "11", "--out", d]].concat());
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("iterations 3 "), "{out}");
    for k in 1..=3 {
        for stem in ["field", "elements", "greville"] {
            assert!(dir.path().join(format!("{stem}_{k:02}.txt")).exists());
        }
    }
    let field = std::fs::read_to_string(dir.path().join("field_03.txt")).unwrap();
    assert_eq!(field.lines().count(), 1 + 121);
    let history = std::fs::read_to_string(dir.path().join("history.txt")).unwrap();
    let est: Vec<f64> = history.lines().skip(1).map(|l| l.split_whitespace().nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(est.len(), 3);
    assert!(est.windows(2).all(|w| w[1] < w[0]), "{est:?}");

    // 17 significant digits
    let first = field.lines().nth(1).unwrap().split_whitespace().next().unwrap().to_string();
    let mantissa = first.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17);

    let again = tempfile::tempdir().unwrap();
    let a = again.path().to_str().unwrap();
    call(&[&args[..], &["--tol", "1e-5", "--grid", "11", "--out", a]].concat());
    for name in ["history.txt", "field_02.txt", "elements_03.txt", "hierarchy.txt"] {
        assert_eq!(std::fs::read(dir.path().join(name)).unwrap(), std::fs::read(again.path().join(name)).unwrap());
    }
}

#[test]
fn solve_rejects_missing_benchmark_and_bad_degrees() {
    assert_eq!(call(&["solve", "--benchmark", "none"]).0, EXIT_INPUT);
    assert_eq!(call(&["solve", "--mesh", &data("tensor8_bicubic.tmesh"), "--p", "2"]).0, EXIT_INPUT);
}
