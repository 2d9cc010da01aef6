//! Extraction export file: everything a finite element code needs to
//! integrate over the hierarchical space without knowing about T-splines.
//!
//! ```text
//! extraction <p> <q> <n_f> <n_e>
//! element <id> <level> <s0> <s1> <t0> <t1>
//! ien <n_loc> <A_1> ... <A_n_loc>
//! <n_loc rows of (p+1)(q+1) Bernstein coefficients>
//! weights <w_1> ... <w_nb>
//! points <x_1> <y_1> ... <x_nb> <y_nb>
//! ```
//!
//! Reals are written with 17 significant digits.

use std::fmt::Write as _;

use super::Extraction;
use crate::fmt17;

pub fn write(ex: &Extraction) -> String {
    let mut out = String::new();
    writeln!(out, "extraction {} {} {} {}", ex.p, ex.q, ex.n_f, ex.n_e()).unwrap();
    let join = |v: &mut dyn Iterator<Item = f64>| v.map(fmt17).collect::<Vec<_>>().join(" ");
    for e in &ex.elements {
        let r = &e.rect;
        writeln!(out, "element {} {} {}", e.id, e.level, join(&mut [r.s0, r.s1, r.t0, r.t1].into_iter())).unwrap();
        let ien: Vec<String> = e.ien.iter().map(|a| a.to_string()).collect();
        writeln!(out, "ien {} {}", e.ien.len(), ien.join(" ")).unwrap();
        for row in e.c.row_iter() {
            writeln!(out, "{}", join(&mut row.iter().copied())).unwrap();
        }
        writeln!(out, "weights {}", join(&mut e.weights.iter().copied())).unwrap();
        writeln!(out, "points {}", join(&mut e.points.iter().flat_map(|p| [p[0], p[1]]))).unwrap();
    }
    out
}
