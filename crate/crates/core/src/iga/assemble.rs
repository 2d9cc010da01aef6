//! SUPG assembly, boundary projection and the constrained solve.

use rayon::prelude::*;

use super::kinematics::evaluate;
use super::problem::Problem;
use super::quadrature::{gauss_legendre, tensor_rule};
use super::sparse::{solve, CscMatrix};
use crate::error::{Error, Result};
use crate::extraction::{BezierElement, Extraction};
use crate::hierarchy::HierarchicalSpace;

pub const SOLVE_TOL: f64 = 1e-10;

/// `tau = h / (2|u|) (coth(Pe) - 1/Pe)`, `Pe = |u| h / (2 kappa)`.
pub fn tau(h: f64, speed: f64, kappa: f64) -> f64 {
    if speed == 0.0 {
        return 0.0;
    }
    let pe = speed * h / (2.0 * kappa);
    let xi = if pe < 1e-3 {
        pe / 3.0 - pe.powi(3) / 45.0
    } else {
        1.0 / pe.tanh() - 1.0 / pe
    };
    h / (2.0 * speed) * xi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub stabilize: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { stabilize: true }
    }
}

/// Physical size and stabilization parameter of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementScale {
    pub area: f64,
    pub h: f64,
    pub tau: f64,
}

pub fn element_scale(problem: &Problem, ex: &Extraction, e: &BezierElement, stabilize: bool) -> Result<ElementScale> {
    let mut area = 0.0;
    for (xi, eta, w) in tensor_rule(ex.p + 1, ex.q + 1) {
        area += evaluate(e, ex.p, ex.q, xi, eta, false)?.det_j * w;
    }
    if !(area > 0.0) {
        return Err(Error::DegenerateElement(e.id));
    }
    let h = area.sqrt();
    let centre = evaluate(e, ex.p, ex.q, 0.0, 0.0, false)?.x;
    let u = (problem.velocity)(centre);
    let speed = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let t = if stabilize { tau(h, speed, problem.kappa) } else { 0.0 };
    Ok(ElementScale { area, h, tau: t })
}

/// Global stiffness matrix and load vector before boundary conditions.
pub fn assemble(problem: &Problem, ex: &Extraction, opts: AssemblyOptions) -> Result<(CscMatrix, Vec<f64>)> {
    let rule = tensor_rule(ex.p + 1, ex.q + 1);
    let kappa = problem.kappa;
    // local matrices in parallel, scattered in element order
    let locals: Vec<(Vec<f64>, Vec<f64>)> = ex
        .elements
        .par_iter()
        .map(|e| {
            let sc = element_scale(problem, ex, e, opts.stabilize)?;
            let n = e.n_loc();
            let mut ke = vec![0.0; n * n];
            let mut fe = vec![0.0; n];
            for &(xi, eta, w) in &rule {
                let pt = evaluate(e, ex.p, ex.q, xi, eta, sc.tau != 0.0)?;
                let dw = pt.det_j * w;
                let u = (problem.velocity)(pt.x);
                let src = (problem.source)(pt.x);
                let adv: Vec<f64> = pt.grad.iter().map(|g| u[0] * g[0] + u[1] * g[1]).collect();
                for a in 0..n {
                    let test = pt.r[a];
                    let stream = sc.tau * adv[a];
                    for b in 0..n {
                        let diff = kappa * (pt.grad[a][0] * pt.grad[b][0] + pt.grad[a][1] * pt.grad[b][1]);
                        let mut v = diff + test * adv[b];
                        if sc.tau != 0.0 {
                            let lap = pt.hess[b][0] + pt.hess[b][2];
                            v += stream * (adv[b] - kappa * lap);
                        }
                        ke[a * n + b] += v * dw;
                    }
                    fe[a] += (test + stream) * src * dw;
                }
            }
            Ok((ke, fe))
        })
        .collect::<Result<_>>()?;
    let mut trip = Vec::new();
    let mut f = vec![0.0; ex.n_f];
    for (e, (ke, fe)) in ex.elements.iter().zip(&locals) {
        let n = e.n_loc();
        for a in 0..n {
            f[e.ien[a]] += fe[a];
            for b in 0..n {
                trip.push((e.ien[a], e.ien[b], ke[a * n + b]));
            }
        }
    }
    Ok((CscMatrix::from_triplets(ex.n_f, trip), f))
}

/// Functions of `H` with a nonzero trace on the parametric boundary.
pub fn boundary_functions(space: &HierarchicalSpace) -> Vec<usize> {
    let (p, q) = (space.p(), space.q());
    space
        .functions()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            let (h, v) = (&f.func.h_knots, &f.func.v_knots);
            h[p] == 0.0 || h[1] == 1.0 || v[q] == 0.0 || v[1] == 1.0
        })
        .map(|(k, _)| k)
        .collect()
}

/// Element edges on the boundary, as `(element, fixed parent coordinate
/// axis, value)`: axis 0 fixes `xi`, axis 1 fixes `eta`.
fn boundary_edges(ex: &Extraction) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for (k, e) in ex.elements.iter().enumerate() {
        let r = &e.rect;
        if r.s0 == 0.0 {
            out.push((k, 0, -1.0));
        }
        if r.s1 == 1.0 {
            out.push((k, 0, 1.0));
        }
        if r.t0 == 0.0 {
            out.push((k, 1, -1.0));
        }
        if r.t1 == 1.0 {
            out.push((k, 1, 1.0));
        }
    }
    out
}

/// Boundary coefficients from the L2 projection of the Dirichlet data onto
/// the traces of the boundary functions.
pub fn dirichlet_values(problem: &Problem, space: &HierarchicalSpace, ex: &Extraction) -> Result<Vec<(usize, f64)>> {
    let bnd = boundary_functions(space);
    let mut local = vec![usize::MAX; ex.n_f];
    for (k, &a) in bnd.iter().enumerate() {
        local[a] = k;
    }
    let (gx, gw) = gauss_legendre(ex.p.max(ex.q) + 2);
    const PIECES: usize = 8;
    let mut trip = Vec::new();
    let mut rhs = vec![0.0; bnd.len()];
    for (k, axis, fixed) in boundary_edges(ex) {
        let e = &ex.elements[k];
        for piece in 0..PIECES {
            let lo = -1.0 + 2.0 * piece as f64 / PIECES as f64;
            let half = 1.0 / PIECES as f64;
            for (x, w) in gx.iter().zip(&gw) {
                let run = lo + half * (x + 1.0);
                let (xi, eta) = if axis == 0 { (fixed, run) } else { (run, fixed) };
                let pt = evaluate(e, ex.p, ex.q, xi, eta, false)?;
                let other = 1 - axis;
                let ds = (pt.jac[0][other].powi(2) + pt.jac[1][other].powi(2)).sqrt() * w * half;
                let g = (problem.dirichlet)(pt.x);
                for (a, &ga) in e.ien.iter().enumerate() {
                    let la = local[ga];
                    if la == usize::MAX || pt.r[a] == 0.0 {
                        continue;
                    }
                    rhs[la] += pt.r[a] * g * ds;
                    for (b, &gb) in e.ien.iter().enumerate() {
                        let lb = local[gb];
                        if lb != usize::MAX {
                            trip.push((la, lb, pt.r[a] * pt.r[b] * ds));
                        }
                    }
                }
            }
        }
    }
    let m = CscMatrix::from_triplets(bnd.len(), trip);
    let x = solve(&m, &rhs, SOLVE_TOL).map_err(|e| Error::SingularSystem(format!("boundary projection: {e}")))?;
    Ok(bnd.into_iter().zip(x).collect())
}

/// Imposes `fixed` coefficients by elimination and solves for the rest.
pub fn solve_constrained(k: &CscMatrix, f: &[f64], fixed: &[(usize, f64)]) -> Result<Vec<f64>> {
    let n = k.n;
    let mut value = vec![None; n];
    for &(a, v) in fixed {
        value[a] = Some(v);
    }
    let mut free_index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for a in 0..n {
        if value[a].is_none() {
            free_index[a] = free.len();
            free.push(a);
        }
    }
    let mut rhs: Vec<f64> = free.iter().map(|&a| f[a]).collect();
    let mut trip = Vec::with_capacity(k.nnz());
    for c in 0..n {
        for idx in k.colptr[c]..k.colptr[c + 1] {
            let r = k.rows[idx];
            let fr = free_index[r];
            if fr == usize::MAX {
                continue;
            }
            match value[c] {
                Some(v) => rhs[fr] -= k.vals[idx] * v,
                None => trip.push((fr, free_index[c], k.vals[idx])),
            }
        }
    }
    let kr = CscMatrix::from_triplets(free.len(), trip);
    let xr = solve(&kr, &rhs, SOLVE_TOL)?;
    let mut x: Vec<f64> = value.iter().map(|v| v.unwrap_or(0.0)).collect();
    for (k, &a) in free.iter().enumerate() {
        x[a] = xr[k];
    }
    Ok(x)
}

/// Assemble, impose the Dirichlet data and solve.
pub fn solve_problem(problem: &Problem, space: &HierarchicalSpace, ex: &Extraction, opts: AssemblyOptions) -> Result<Vec<f64>> {
    let (k, f) = assemble(problem, ex, opts)?;
    let fixed = dirichlet_values(problem, space, ex)?;
    solve_constrained(&k, &f, &fixed)
}
