//! The solve-estimate-mark-refine loop.

use super::assemble::{solve_problem, AssemblyOptions};
use super::estimate::{estimate, mark, total, Marking};
use super::kinematics::evaluate;
use super::problem::Problem;
use crate::error::Result;
use crate::extraction::{extract, Extraction};
use crate::hierarchy::HierarchicalSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub tol: f64,
    pub beta: f64,
    pub max_levels: usize,
    /// Number of solves at most.
    pub max_iterations: usize,
    pub stabilize: bool,
}

impl AdaptiveOptions {
    pub fn new(p: usize, q: usize) -> Self {
        AdaptiveOptions {
            tol: 1e-3,
            beta: (p.min(q) + 1) as f64,
            max_levels: crate::hierarchy::DEFAULT_MAX_LEVELS,
            max_iterations: 5,
            stabilize: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub n_f: usize,
    pub n_e: usize,
    pub depth: usize,
    pub total_estimate: f64,
    pub marked: usize,
}

/// Everything known at the end of one iteration, before refinement.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub space: HierarchicalSpace,
    pub extraction: Extraction,
    pub coeffs: Vec<f64>,
    pub estimates: Vec<f64>,
    pub marking: Marking,
}

#[derive(Debug, Clone)]
pub struct AdaptiveRun {
    pub history: Vec<IterationRecord>,
    pub last: Snapshot,
    pub converged: bool,
}

/// Runs the adaptive loop from `space`; `observe` sees every iteration.
pub fn adaptive_loop(
    problem: &Problem,
    space: HierarchicalSpace,
    opts: &AdaptiveOptions,
    mut observe: impl FnMut(&Snapshot, &IterationRecord) -> Result<()>,
) -> Result<AdaptiveRun> {
    let mut space = space.with_max_levels(opts.max_levels);
    let mut history = Vec::new();
    let mut iteration = 0;
    loop {
        iteration += 1;
        let extraction = extract(&space)?;
        let coeffs = solve_problem(problem, &space, &extraction, AssemblyOptions { stabilize: opts.stabilize })?;
        let estimates = estimate(problem, &extraction, &coeffs)?;
        let mut marking = mark(&estimates, opts.tol, opts.beta);
        marking.marked.retain(|&k| space.elements()[k].level < opts.max_levels);
        let rec = IterationRecord {
            iteration,
            n_f: space.n_f(),
            n_e: space.n_e(),
            depth: space.depth(),
            total_estimate: total(&estimates),
            marked: marking.marked.len(),
        };
        history.push(rec);
        let snap = Snapshot { space, extraction, coeffs, estimates, marking };
        observe(&snap, &rec)?;
        let done = snap.marking.marked.is_empty();
        if done || iteration >= opts.max_iterations {
            return Ok(AdaptiveRun { history, last: snap, converged: done });
        }
        space = snap.space;
        space.refine_in_place(&snap.marking.marked)?;
    }
}

/// Point location over the elements of an extraction.
pub struct Locator<'a> {
    ex: &'a Extraction,
    k: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> Locator<'a> {
    pub fn new(ex: &'a Extraction) -> Self {
        let k = ((ex.n_e() as f64).sqrt().ceil() as usize).clamp(1, 512);
        let mut buckets = vec![Vec::new(); k * k];
        let cell = |v: f64| ((v * k as f64).floor() as usize).min(k - 1);
        for (idx, e) in ex.elements.iter().enumerate() {
            let r = &e.rect;
            for y in cell(r.t0)..=cell(r.t1) {
                for x in cell(r.s0)..=cell(r.s1) {
                    buckets[y * k + x].push(idx);
                }
            }
        }
        Locator { ex, k, buckets }
    }

    pub fn find(&self, s: f64, t: f64) -> Option<usize> {
        let cell = |v: f64| ((v * self.k as f64).floor().max(0.0) as usize).min(self.k - 1);
        self.buckets[cell(t) * self.k + cell(s)]
            .iter()
            .copied()
            .find(|&idx| self.ex.elements[idx].rect.contains_point(s, t))
    }

    /// Physical point and solution value at parametric `(s, t)`.
    pub fn eval(&self, coeffs: &[f64], s: f64, t: f64) -> Result<Option<([f64; 2], f64)>> {
        let Some(idx) = self.find(s, t) else { return Ok(None) };
        let e = &self.ex.elements[idx];
        let (xi, eta) = e.map_to_parent(s, t);
        let pt = evaluate(e, self.ex.p, self.ex.q, xi, eta, false)?;
        let phi = e.ien.iter().enumerate().map(|(a, &g)| coeffs[g] * pt.r[a]).sum();
        Ok(Some((pt.x, phi)))
    }
}
