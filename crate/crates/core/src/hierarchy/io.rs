//! Plain-text hierarchy format.
//!
//! ```text
//! hierarchy <levels> <max_levels>
//! level 1
//! <T-mesh section with knots>
//! ...
//! domain <alpha> <count>
//! <i0> <i1> <j0> <j1>          parent-level element cells
//! geometry <count>
//! <x> <y> <w>
//! ```
//!
//! Levels after the first are redundant (they are rebuilt from level 1)
//! and are checked on reading.

use std::fmt::Write as _;

use super::HierarchicalSpace;
use crate::error::{Error, Result};
use crate::fmt17;
use crate::tmesh::io::{self as mesh_io, MeshFile};
use crate::tmesh::Cell;

pub fn write(space: &HierarchicalSpace) -> String {
    let mut out = String::new();
    writeln!(out, "hierarchy {} {}", space.levels().len(), space.max_levels()).unwrap();
    for lvl in space.levels() {
        writeln!(out, "level {}", lvl.alpha).unwrap();
        out.push_str(&mesh_io::write(&MeshFile { mesh: lvl.mesh.clone(), knots: Some(lvl.knots.clone()) }));
    }
    for alpha in 2..=space.levels().len() {
        let parts = space.domain(alpha).parts();
        writeln!(out, "domain {alpha} {}", parts.len()).unwrap();
        for c in parts {
            writeln!(out, "{} {} {} {}", c.i0, c.i1, c.j0, c.j1).unwrap();
        }
    }
    writeln!(out, "geometry {}", space.geometric().len()).unwrap();
    for (p, w) in space.control_points().iter().zip(space.weights()) {
        writeln!(out, "{} {} {}", fmt17(p[0]), fmt17(p[1]), fmt17(*w)).unwrap();
    }
    out
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column: 1, message: message.into() }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse { line: line + offset, column, message },
        other => other,
    }
}

fn nums<T: std::str::FromStr>(line: usize, toks: &[&str]) -> Result<Vec<T>> {
    toks.iter().map(|t| t.parse().map_err(|_| perr(line, format!("cannot parse `{t}`")))).collect()
}

pub fn parse(text: &str) -> Result<HierarchicalSpace> {
    let lines: Vec<&str> = text.lines().collect();
    let content = |k: usize| {
        let l = lines[k].trim();
        !l.is_empty() && !l.starts_with('#')
    };
    let mut k = (0..lines.len()).find(|&k| content(k)).ok_or_else(|| perr(0, "empty file"))?;
    let head: Vec<&str> = lines[k].split_whitespace().collect();
    if head.len() != 3 || head[0] != "hierarchy" {
        return Err(perr(k + 1, "expected `hierarchy <levels> <max_levels>`"));
    }
    let hv: Vec<usize> = nums(k + 1, &head[1..])?;
    let (nlevels, max_levels) = (hv[0], hv[1]);
    k += 1;

    let keyword = |k: usize| lines[k].split_whitespace().next().unwrap_or("");
    let mut meshes = Vec::new();
    while k < lines.len() && (!content(k) || keyword(k) == "level") {
        if !content(k) {
            k += 1;
            continue;
        }
        let start = k + 1;
        let mut end = start;
        while end < lines.len() && !matches!(keyword(end), "level" | "domain" | "geometry") {
            end += 1;
        }
        let section = lines[start..end].join("\n");
        meshes.push(mesh_io::parse(&section).map_err(|e| shift(e, start))?);
        k = end;
    }
    if meshes.len() != nlevels || nlevels == 0 {
        return Err(perr(k + 1, format!("expected {nlevels} level sections, found {}", meshes.len())));
    }
    let first = meshes[0].clone();
    let knots = first.knots.ok_or_else(|| perr(1, "level 1 needs knot vectors"))?;
    let mut space = HierarchicalSpace::new(first.mesh, knots)?.with_max_levels(max_levels);
    space.ensure_level(nlevels)?;
    for (alpha, file) in meshes.iter().enumerate().skip(1) {
        let lvl = space.level(alpha + 1);
        if file.mesh != lvl.mesh || file.knots.as_ref() != Some(&lvl.knots) {
            return Err(Error::Incompatible(format!("level {} does not match its parent", alpha + 1)));
        }
    }

    let mut geometry = None;
    while k < lines.len() {
        if !content(k) {
            k += 1;
            continue;
        }
        let toks: Vec<&str> = lines[k].split_whitespace().collect();
        match toks[0] {
            "domain" if toks.len() == 3 => {
                let v: Vec<usize> = nums(k + 1, &toks[1..])?;
                let (alpha, count) = (v[0], v[1]);
                if alpha < 2 || alpha > nlevels {
                    return Err(perr(k + 1, format!("domain for missing level {alpha}")));
                }
                k += 1;
                let mut cells = Vec::with_capacity(count);
                while cells.len() < count {
                    if k >= lines.len() {
                        return Err(perr(k, "unexpected end of file in domain"));
                    }
                    if content(k) {
                        let c: Vec<usize> = nums(k + 1, &lines[k].split_whitespace().collect::<Vec<_>>())?;
                        if c.len() != 4 {
                            return Err(perr(k + 1, "domain cells need four indices"));
                        }
                        cells.push(Cell { i0: c[0], i1: c[1], j0: c[2], j1: c[3] });
                    }
                    k += 1;
                }
                let parent = space.level(alpha - 1);
                let mut rects = Vec::with_capacity(count);
                for c in &cells {
                    let rect = parent
                        .elements
                        .iter()
                        .find(|(cell, _)| cell == c)
                        .map(|(_, r)| *r)
                        .ok_or(Error::BadDomain { level: alpha })?;
                    rects.push(rect);
                }
                space.set_domain(alpha - 1, &rects)?;
            }
            "geometry" if toks.len() == 2 => {
                let count: usize = nums(k + 1, &toks[1..2])?[0];
                k += 1;
                let (mut pts, mut ws) = (Vec::new(), Vec::new());
                while pts.len() < count {
                    if k >= lines.len() {
                        return Err(perr(k, "unexpected end of file in geometry"));
                    }
                    if content(k) {
                        let v: Vec<f64> = nums(k + 1, &lines[k].split_whitespace().collect::<Vec<_>>())?;
                        if v.len() != 3 {
                            return Err(perr(k + 1, "geometry rows are `x y w`"));
                        }
                        pts.push([v[0], v[1]]);
                        ws.push(v[2]);
                    }
                    k += 1;
                }
                geometry = Some((pts, ws));
            }
            other => return Err(perr(k + 1, format!("unexpected `{other}`"))),
        }
    }
    if let Some((pts, ws)) = geometry {
        space.set_geometry(pts, ws)?;
    }
    Ok(space)
}
