//! Rational basis functions and their physical derivatives on one Bezier
//! element, evaluated from the extraction arrays alone.

use crate::error::{Error, Result};
use crate::extraction::{bern_index, bernstein_derivatives, BezierElement};

/// Values at one parent point. Hessians are stored as `[xx, xy, yy]`.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub x: [f64; 2],
    /// `jac[k][i] = d x_k / d xi_i`.
    pub jac: [[f64; 2]; 2],
    pub det_j: f64,
    pub r: Vec<f64>,
    pub grad: Vec<[f64; 2]>,
    pub hess: Vec<[f64; 3]>,
}

/// Bernstein values with parent derivatives: `[b, b_xi, b_eta, b_xixi, b_xieta, b_etaeta]`.
fn bivariate(p: usize, q: usize, xi: f64, eta: f64) -> Vec<[f64; 6]> {
    let u = bernstein_derivatives(p, xi, 2);
    let v = bernstein_derivatives(q, eta, 2);
    let mut out = vec![[0.0; 6]; (p + 1) * (q + 1)];
    for j in 0..=q {
        for i in 0..=p {
            out[bern_index(p, i + 1, j + 1) - 1] = [
                u[0][i] * v[0][j],
                u[1][i] * v[0][j],
                u[0][i] * v[1][j],
                u[2][i] * v[0][j],
                u[1][i] * v[1][j],
                u[0][i] * v[2][j],
            ];
        }
    }
    out
}

/// Quotient rule for `f / w` given the six parent derivatives of both.
fn quotient(f: [f64; 6], w: [f64; 6]) -> [f64; 6] {
    let r = f[0] / w[0];
    let r1 = (f[1] - r * w[1]) / w[0];
    let r2 = (f[2] - r * w[2]) / w[0];
    let r11 = (f[3] - 2.0 * r1 * w[1] - r * w[3]) / w[0];
    let r12 = (f[4] - r1 * w[2] - r2 * w[1] - r * w[4]) / w[0];
    let r22 = (f[5] - 2.0 * r2 * w[2] - r * w[5]) / w[0];
    [r, r1, r2, r11, r12, r22]
}

pub fn evaluate(e: &BezierElement, p: usize, q: usize, xi: f64, eta: f64, hessians: bool) -> Result<PointEval> {
    let b = bivariate(p, q, xi, eta);
    let mut w = [0.0; 6];
    let mut xw = [[0.0; 6]; 2];
    for (k, bk) in b.iter().enumerate() {
        for d in 0..6 {
            w[d] += e.weights[k] * bk[d];
            xw[0][d] += e.points[k][0] * e.weights[k] * bk[d];
            xw[1][d] += e.points[k][1] * e.weights[k] * bk[d];
        }
    }
    let gx = quotient(xw[0], w);
    let gy = quotient(xw[1], w);
    // J[k][i] = d x_k / d xi_i
    let j = [[gx[1], gx[2]], [gy[1], gy[2]]];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det > 0.0) {
        return Err(Error::DegenerateElement(e.id));
    }
    // inverse: d xi_i / d x_k
    let inv = [[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]];

    let n = e.ien.len();
    let mut r = Vec::with_capacity(n);
    let mut grad = Vec::with_capacity(n);
    let mut hess = Vec::with_capacity(if hessians { n } else { 0 });
    for a in 0..n {
        let mut f = [0.0; 6];
        for (k, bk) in b.iter().enumerate() {
            let c = e.c[(a, k)];
            if c != 0.0 {
                for d in 0..6 {
                    f[d] += c * bk[d];
                }
            }
        }
        let ra = quotient(f, w);
        // grad_x = J^{-T} grad_xi
        let gxi = [ra[1], ra[2]];
        let g = [inv[0][0] * gxi[0] + inv[1][0] * gxi[1], inv[0][1] * gxi[0] + inv[1][1] * gxi[1]];
        r.push(ra[0]);
        grad.push(g);
        if hessians {
            // H_xi = J^T H_x J + sum_k g_k * (second parent derivatives of x_k)
            let m = [
                [ra[3] - g[0] * gx[3] - g[1] * gy[3], ra[4] - g[0] * gx[4] - g[1] * gy[4]],
                [ra[4] - g[0] * gx[4] - g[1] * gy[4], ra[5] - g[0] * gx[5] - g[1] * gy[5]],
            ];
            // H_x = J^{-T} m J^{-1}
            let mut hx = [[0.0; 2]; 2];
            for (a1, row) in hx.iter_mut().enumerate() {
                for (b1, val) in row.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for i in 0..2 {
                        for k in 0..2 {
                            acc += inv[i][a1] * m[i][k] * inv[k][b1];
                        }
                    }
                    *val = acc;
                }
            }
            hess.push([hx[0][0], hx[0][1], hx[1][1]]);
        }
    }
    Ok(PointEval { x: [gx[0], gy[0]], jac: j, det_j: det, r, grad, hess })
}
