//! Residual-based element error indicators and marking.

use rayon::prelude::*;

use super::assemble::element_scale;
use super::kinematics::evaluate;
use super::problem::Problem;
use super::quadrature::tensor_rule;
use crate::error::Result;
use crate::extraction::Extraction;

/// `tau_e * || u . grad(phi) - kappa lap(phi) - f ||_{L2(element)}` per element.
pub fn estimate(problem: &Problem, ex: &Extraction, coeffs: &[f64]) -> Result<Vec<f64>> {
    let rule = tensor_rule(ex.p + 1, ex.q + 1);
    ex.elements
        .par_iter()
        .map(|e| {
            let sc = element_scale(problem, ex, e, true)?;
            if sc.tau == 0.0 {
                return Ok(0.0);
            }
            let mut sq = 0.0;
            for &(xi, eta, w) in &rule {
                let pt = evaluate(e, ex.p, ex.q, xi, eta, true)?;
                let u = (problem.velocity)(pt.x);
                let (mut gx, mut gy, mut lap) = (0.0, 0.0, 0.0);
                for (a, &ga) in e.ien.iter().enumerate() {
                    let c = coeffs[ga];
                    gx += c * pt.grad[a][0];
                    gy += c * pt.grad[a][1];
                    lap += c * (pt.hess[a][0] + pt.hess[a][2]);
                }
                let res = u[0] * gx + u[1] * gy - problem.kappa * lap - (problem.source)(pt.x);
                sq += res * res * pt.det_j * w;
            }
            Ok(sc.tau * sq.sqrt())
        })
        .collect()
}

/// Global aggregate of the element indicators.
pub fn total(estimates: &[f64]) -> f64 {
    estimates.iter().map(|e| e * e).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marking {
    /// Predicted size ratio `(tol / est)^(1/beta)` per element.
    pub ratios: Vec<f64>,
    pub marked: Vec<usize>,
}

/// Flags the elements whose size ratio is below one.
pub fn mark(estimates: &[f64], tol: f64, beta: f64) -> Marking {
    let ratios: Vec<f64> =
        estimates.iter().map(|&e| if e == 0.0 { f64::INFINITY } else { (tol / e).powf(1.0 / beta) }).collect();
    let marked = ratios.iter().enumerate().filter(|(_, r)| **r < 1.0).map(|(k, _)| k).collect();
    Marking { ratios, marked }
}
