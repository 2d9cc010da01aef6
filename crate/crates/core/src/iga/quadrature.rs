//! Gauss-Legendre rules on `[-1, 1]`.

/// Nodes and weights of the `n`-point rule, by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[k] = -z;
        x[n - 1 - k] = z;
        let wk = 2.0 / ((1.0 - z * z) * dp * dp);
        w[k] = wk;
        w[n - 1 - k] = wk;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Tensor rule with `nx * ny` points: `(xi, eta, weight)`.
pub fn tensor_rule(nx: usize, ny: usize) -> Vec<(f64, f64, f64)> {
    let (x, wx) = gauss_legendre(nx);
    let (y, wy) = gauss_legendre(ny);
    let mut out = Vec::with_capacity(nx * ny);
    for (b, yb) in y.iter().enumerate() {
        for (a, xa) in x.iter().enumerate() {
            out.push((*xa, *yb, wx[a] * wy[b]));
        }
    }
    out
}
