//! Plain-text T-mesh format.
//!
//! ```text
//! tmesh <m> <n> <p> <q>
//! hknots <s_1> ... <s_m>        (optional, both or neither)
//! vknots <t_1> ... <t_n>
//! vertices <count>
//! <i> <j>
//! edges <count>
//! <i0> <j0> <i1> <j1>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Edges are
//! axis-aligned and both endpoints must be listed vertices. Writing emits
//! vertices in row-major order and edges as maximal runs between vertices,
//! so `write(read(write(x))) == write(x)` byte for byte.

use std::fmt::Write as _;

use super::{Segment, TMesh};
use crate::basis::GlobalKnots;
use crate::error::{Error, Result};
use crate::fmt17;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshFile {
    pub mesh: TMesh,
    pub knots: Option<GlobalKnots>,
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l))
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#')),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner.next().ok_or_else(|| Error::Parse {
            line: 0,
            column: 0,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split_whitespace().next())
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..k]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_num<T: std::str::FromStr>(lineno: usize, col: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| err(lineno, col, format!("cannot parse `{tok}`")))
}

fn expect_header<'a>(
    lineno: usize,
    line: &'a str,
    keyword: &str,
    count: usize,
) -> Result<Vec<(usize, &'a str)>> {
    let toks = tokens(line);
    match toks.first() {
        Some((_, k)) if *k == keyword => {}
        Some((c, k)) => return Err(err(lineno, *c, format!("expected `{keyword}`, found `{k}`"))),
        None => return Err(err(lineno, 1, format!("expected `{keyword}`"))),
    }
    if count != usize::MAX && toks.len() != count + 1 {
        return Err(err(lineno, line.len() + 1, format!("`{keyword}` expects {count} values")));
    }
    Ok(toks[1..].to_vec())
}

pub fn parse(text: &str) -> Result<MeshFile> {
    let mut lines = Lines::new(text);
    let (ln, l) = lines.next("tmesh header")?;
    let h = expect_header(ln, l, "tmesh", 4)?;
    let vals: Vec<usize> = h.iter().map(|(c, t)| parse_num(ln, *c, t)).collect::<Result<_>>()?;
    let (m, n, p, q) = (vals[0], vals[1], vals[2], vals[3]);
    let mut mesh = TMesh::empty(m, n, p, q).map_err(|e| err(ln, 1, e.to_string()))?;

    let mut knots = None;
    if lines.peek_keyword() == Some("hknots") {
        let (ln, l) = lines.next("hknots")?;
        let hk: Vec<f64> =
            expect_header(ln, l, "hknots", m)?.iter().map(|(c, t)| parse_num(ln, *c, t)).collect::<Result<_>>()?;
        let (ln, l) = lines.next("vknots")?;
        let vk: Vec<f64> =
            expect_header(ln, l, "vknots", n)?.iter().map(|(c, t)| parse_num(ln, *c, t)).collect::<Result<_>>()?;
        let k = GlobalKnots::new(hk, vk);
        k.check(p, q).map_err(|e| err(ln, 1, e.to_string()))?;
        knots = Some(k);
    }

    let (ln, l) = lines.next("vertices")?;
    let h = expect_header(ln, l, "vertices", 1)?;
    let nv: usize = parse_num(ln, h[0].0, h[0].1)?;
    for _ in 0..nv {
        let (ln, l) = lines.next("vertex")?;
        let t = tokens(l);
        if t.len() != 2 {
            return Err(err(ln, 1, "vertex line needs `i j`"));
        }
        let i: usize = parse_num(ln, t[0].0, t[0].1)?;
        let j: usize = parse_num(ln, t[1].0, t[1].1)?;
        mesh.add_vertex(i, j).map_err(|e| err(ln, t[0].0, e.to_string()))?;
    }

    let (ln, l) = lines.next("edges")?;
    let h = expect_header(ln, l, "edges", 1)?;
    let ne: usize = parse_num(ln, h[0].0, h[0].1)?;
    let mut segments = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (ln, l) = lines.next("edge")?;
        let t = tokens(l);
        if t.len() != 4 {
            return Err(err(ln, 1, "edge line needs `i0 j0 i1 j1`"));
        }
        let v: Vec<usize> = t.iter().map(|(c, s)| parse_num(ln, *c, s)).collect::<Result<_>>()?;
        let seg = if v[1] == v[3] && v[0] != v[2] {
            Segment::horizontal(v[1], v[0], v[2])
        } else if v[0] == v[2] && v[1] != v[3] {
            Segment::vertical(v[0], v[1], v[3])
        } else {
            return Err(err(ln, 1, "edge is not a non-degenerate axis-aligned segment"));
        };
        segments.push((ln, seg));
    }
    if let Some((ln, l)) = lines.inner.next() {
        return Err(err(ln, 1, format!("trailing content `{}`", l.trim())));
    }
    for (ln, seg) in segments {
        for (i, j) in seg.endpoints() {
            if !mesh.is_vertex(i, j) {
                return Err(Error::MalformedMesh(format!(
                    "line {ln}: edge endpoint ({i},{j}) is not a listed vertex"
                )));
            }
        }
        mesh.mark_segment(seg).map_err(|e| err(ln, 1, e.to_string()))?;
    }
    Ok(MeshFile { mesh, knots })
}

pub fn write(file: &MeshFile) -> String {
    let mesh = &file.mesh;
    let mut out = String::new();
    writeln!(out, "tmesh {} {} {} {}", mesh.m(), mesh.n(), mesh.p(), mesh.q()).unwrap();
    if let Some(k) = &file.knots {
        let join = |v: &[f64]| v.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(" ");
        writeln!(out, "hknots {}", join(k.h())).unwrap();
        writeln!(out, "vknots {}", join(k.v())).unwrap();
    }
    let verts = mesh.vertices();
    writeln!(out, "vertices {}", verts.len()).unwrap();
    for (i, j) in verts {
        writeln!(out, "{i} {j}").unwrap();
    }
    let edges = mesh.edges();
    writeln!(out, "edges {}", edges.len()).unwrap();
    for e in edges {
        let [(a, b), (c, d)] = e.endpoints();
        writeln!(out, "{a} {b} {c} {d}").unwrap();
    }
    out
}

pub fn read_path(path: &std::path::Path) -> Result<MeshFile> {
    parse(&std::fs::read_to_string(path)?)
}
