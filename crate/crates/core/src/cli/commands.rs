use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::config::{Benchmark, Command, RunConfig};
use super::{EXIT_DOMAIN, EXIT_OK};
use crate::basis::GlobalKnots;
use crate::error::{Error, Result};
use crate::extraction::{export, extract};
use crate::hierarchy::{io as hio, HierarchicalSpace};
use crate::iga::{adaptive_loop, output, AdaptiveOptions, Problem};
use crate::tmesh::io::{self as mio, MeshFile};
use crate::tmesh::random::{random_mesh, RandomMeshSpec};
use crate::tmesh::TMesh;
use crate::{fmt17, samples};

enum Input {
    Mesh(MeshFile),
    Hierarchy(HierarchicalSpace),
}

pub(super) fn dispatch(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match cfg.command {
        Command::Validate => validate(cfg, out),
        Command::Extract => run_extract(cfg, out),
        Command::Refine => refine(cfg, out),
        Command::Solve => solve(cfg, out),
    }
}

fn degrees(cfg: &RunConfig) -> (usize, usize) {
    (cfg.p.unwrap_or(3), cfg.q.unwrap_or(cfg.p.unwrap_or(3)))
}

fn check_degrees(cfg: &RunConfig, p: usize, q: usize) -> Result<()> {
    match (cfg.p, cfg.q) {
        (Some(a), _) if a != p => Err(Error::Config(format!("--p {a} does not match the file degree {p}"))),
        (_, Some(b)) if b != q => Err(Error::Config(format!("--q {b} does not match the file degree {q}"))),
        _ => Ok(()),
    }
}

fn load(cfg: &RunConfig, generated: impl FnOnce(usize, usize) -> Result<MeshFile>) -> Result<Input> {
    let Some(path) = &cfg.mesh else {
        let (p, q) = degrees(cfg);
        return Ok(Input::Mesh(generated(p, q)?));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next());
    let input = if first == Some("hierarchy") {
        let space = hio::parse(&text)?;
        check_degrees(cfg, space.p(), space.q())?;
        Input::Hierarchy(space)
    } else {
        let file = mio::parse(&text)?;
        check_degrees(cfg, file.mesh.p(), file.mesh.q())?;
        Input::Mesh(file)
    };
    Ok(input)
}

fn random_input(cfg: &RunConfig) -> impl FnOnce(usize, usize) -> Result<MeshFile> + '_ {
    move |p, q| {
        let spans = cfg.spans.unwrap_or(8);
        let spec = RandomMeshSpec { spans_x: spans, spans_y: spans, p, q, removals: 2 * spans * spans, analysis_suitable: true };
        let mesh = random_mesh(spec, cfg.seed)?;
        let knots = GlobalKnots::uniform(mesh.m(), mesh.n(), p, q);
        Ok(MeshFile { mesh, knots: Some(knots) })
    }
}

fn space_of(input: Input, max_levels: usize) -> Result<HierarchicalSpace> {
    match input {
        Input::Hierarchy(s) => {
            let depth = s.depth();
            Ok(s.with_max_levels(max_levels.max(depth)))
        }
        Input::Mesh(f) => {
            let report = f.mesh.validate();
            if !report.is_valid() {
                return Err(Error::InvalidMesh(format!("{:?}", report.violations)));
            }
            let knots = f.knots.unwrap_or_else(|| GlobalKnots::uniform(f.mesh.m(), f.mesh.n(), f.mesh.p(), f.mesh.q()));
            Ok(HierarchicalSpace::new(f.mesh, knots)?.with_max_levels(max_levels))
        }
    }
}

fn emit(cfg: &RunConfig, name: &str, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(dir) => write_file(dir, name, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn validation_report(file: &MeshFile) -> (bool, String) {
    let mesh: &TMesh = &file.mesh;
    let knots = file.knots.clone().unwrap_or_else(|| GlobalKnots::uniform(mesh.m(), mesh.n(), mesh.p(), mesh.q()));
    let mut r = String::new();
    writeln!(r, "mesh {} {} {} {}", mesh.m(), mesh.n(), mesh.p(), mesh.q()).unwrap();
    let report = mesh.validate();
    writeln!(r, "valid {}", yes(report.is_valid())).unwrap();
    for v in &report.violations {
        writeln!(r, "violation {v:?}").unwrap();
    }
    writeln!(r, "t-junctions {}", mesh.t_junctions().len()).unwrap();
    let (ok, pairs) = mesh.analysis_suitability();
    writeln!(r, "analysis-suitable {}", yes(ok)).unwrap();
    writeln!(r, "offending-pairs {}", pairs.len()).unwrap();
    let seg = |s: crate::tmesh::Segment| {
        let [(a, b), (c, d)] = s.endpoints();
        format!(
            "({a},{b})-({c},{d}) [{} {}]-[{} {}]",
            fmt17(knots.s(a)),
            fmt17(knots.t(b)),
            fmt17(knots.s(c)),
            fmt17(knots.t(d))
        )
    };
    for p in &pairs {
        writeln!(r, "pair horizontal {} vertical {}", seg(p.horizontal.span()), seg(p.vertical.span())).unwrap();
    }
    (report.is_valid() && ok, r)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let file = match load(cfg, random_input(cfg))? {
        Input::Mesh(f) => f,
        Input::Hierarchy(space) => {
            writeln!(out, "hierarchy with {} levels: valid yes analysis-suitable yes", space.depth())?;
            return Ok(EXIT_OK);
        }
    };
    let (ok, report) = validation_report(&file);
    out.write_all(report.as_bytes())?;
    if let Some(dir) = &cfg.out {
        write_file(dir, "validate.txt", &report)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_DOMAIN })
}

fn run_extract(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let space = space_of(load(cfg, random_input(cfg))?, cfg.max_levels)?;
    let ex = extract(&space)?;
    emit(cfg, "extraction.txt", &export::write(&ex), out)?;
    writeln!(out, "n_f {} n_e {}", ex.n_f, ex.n_e())?;
    Ok(EXIT_OK)
}

fn refine(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let mut space = space_of(load(cfg, random_input(cfg))?, cfg.max_levels)?;
    if cfg.uniform {
        space.refine_all()?;
    } else {
        if let Some(&bad) = cfg.mark.iter().find(|&&k| k >= space.n_e()) {
            return Err(Error::Config(format!("element {bad} out of range 0..{}", space.n_e())));
        }
        space.refine_in_place(&cfg.mark)?;
    }
    emit(cfg, "hierarchy.txt", &hio::write(&space), out)?;
    writeln!(out, "levels {} n_f {} n_e {}", space.depth(), space.n_f(), space.n_e())?;
    Ok(EXIT_OK)
}

fn solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = match cfg.benchmark {
        Benchmark::Skew45 => Problem::skew45(),
        Benchmark::Manufactured => Problem::manufactured(),
        Benchmark::None => return Err(Error::Config("solve needs a benchmark".into())),
    };
    let spans = cfg.spans.unwrap_or(32);
    let space = space_of(load(cfg, |p, q| samples::tensor(spans, p, q))?, cfg.max_levels)?;
    let (p, q) = (space.p(), space.q());
    let opts = AdaptiveOptions {
        tol: cfg.tol,
        beta: cfg.beta.unwrap_or((p.min(q) + 1) as f64),
        max_levels: cfg.max_levels,
        max_iterations: cfg.iterations,
        stabilize: true,
    };
    let run = adaptive_loop(&problem, space, &opts, |snap, rec| {
        if let Some(dir) = &cfg.out {
            let k = rec.iteration;
            write_file(dir, &format!("field_{k:02}.txt"), &output::field_grid(snap, cfg.grid)?)?;
            write_file(dir, &format!("elements_{k:02}.txt"), &output::element_map(snap))?;
            write_file(dir, &format!("greville_{k:02}.txt"), &output::greville(snap)?)?;
        }
        Ok(())
    })?;
    if let Some(dir) = &cfg.out {
        write_file(dir, "history.txt", &output::history(&run.history))?;
        write_file(dir, "hierarchy.txt", &hio::write(&run.last.space))?;
    }
    let last = run.history.last().expect("at least one iteration");
    writeln!(
        out,
        "iterations {} n_f {} n_e {} estimate {} converged {}",
        last.iteration,
        last.n_f,
        last.n_e,
        fmt17(last.total_estimate),
        yes(run.converged)
    )?;
    Ok(EXIT_OK)
}
