//! Plain-text artifacts of an adaptive run. Every file starts with a `#`
//! line naming its columns; numbers use 17 significant digits.

use std::fmt::Write as _;

use super::adaptive::{IterationRecord, Locator, Snapshot};
use crate::error::Result;
use crate::fmt17;

/// `x y phi` on an `n x n` grid of parametric points, row by row in `t`.
pub fn field_grid(snap: &Snapshot, n: usize) -> Result<String> {
    let loc = Locator::new(&snap.extraction);
    let mut out = String::from("# x y phi\n");
    for j in 0..n {
        for i in 0..n {
            let s = i as f64 / (n - 1) as f64;
            let t = j as f64 / (n - 1) as f64;
            if let Some((x, phi)) = loc.eval(&snap.coeffs, s, t)? {
                writeln!(out, "{} {} {}", fmt17(x[0]), fmt17(x[1]), fmt17(phi)).unwrap();
            }
        }
    }
    Ok(out)
}

/// One row per Bezier element: level, parametric box, estimate and mark.
pub fn element_map(snap: &Snapshot) -> String {
    let mut out = String::from("# element level s0 s1 t0 t1 estimate marked\n");
    let mut marked = vec![false; snap.estimates.len()];
    for &k in &snap.marking.marked {
        marked[k] = true;
    }
    for (k, e) in snap.extraction.elements.iter().enumerate() {
        let r = &e.rect;
        writeln!(
            out,
            "{k} {} {} {} {} {} {} {}",
            e.level,
            fmt17(r.s0),
            fmt17(r.s1),
            fmt17(r.t0),
            fmt17(r.t1),
            fmt17(snap.estimates[k]),
            u8::from(marked[k])
        )
        .unwrap();
    }
    out
}

/// Greville points of the functions in `H`, parametric and mapped.
pub fn greville(snap: &Snapshot) -> Result<String> {
    let loc = Locator::new(&snap.extraction);
    let zeros = vec![0.0; snap.extraction.n_f];
    let mut out = String::from("# function level s t x y\n");
    for (k, f) in snap.space.functions().iter().enumerate() {
        let (s, t) = f.func.greville();
        let x = loc.eval(&zeros, s, t)?.map(|(x, _)| x).unwrap_or([f64::NAN; 2]);
        writeln!(out, "{k} {} {} {} {} {}", f.level, fmt17(s), fmt17(t), fmt17(x[0]), fmt17(x[1])).unwrap();
    }
    Ok(out)
}

pub fn history(records: &[IterationRecord]) -> String {
    let mut out = String::from("# iteration n_f n_e depth total_estimate marked\n");
    for r in records {
        writeln!(out, "{} {} {} {} {} {}", r.iteration, r.n_f, r.n_e, r.depth, fmt17(r.total_estimate), r.marked).unwrap();
    }
    out
}
