//! Compressed-column matrices and the direct solver wrapper.

use crate::error::{Error, Result};

/// Square matrix in compressed sparse column form.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    pub n: usize,
    pub colptr: Vec<usize>,
    pub rows: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CscMatrix {
    /// Sums duplicate entries; the summation order is the triplet order,
    /// so equal inputs give bit-identical matrices.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> CscMatrix {
        t.sort_by_key(|&(r, c, _)| (c, r));
        let mut colptr = vec![0; n + 1];
        let mut rows = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                vals.push(v);
                colptr[c + 1] += 1;
                last = Some((r, c));
            }
        }
        for c in 0..n {
            colptr[c + 1] += colptr[c];
        }
        CscMatrix { n, colptr, rows, vals }
    }

    pub fn identity(n: usize) -> CscMatrix {
        CscMatrix::from_triplets(n, (0..n).map(|k| (k, k, 1.0)).collect())
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for c in 0..self.n {
            for k in self.colptr[c]..self.colptr[c + 1] {
                y[self.rows[k]] += self.vals[k] * x[c];
            }
        }
        y
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        (self.colptr[c]..self.colptr[c + 1]).find(|&k| self.rows[k] == r).map_or(0.0, |k| self.vals[k])
    }

    pub fn transpose(&self) -> CscMatrix {
        let mut t = Vec::with_capacity(self.nnz());
        for c in 0..self.n {
            for k in self.colptr[c]..self.colptr[c + 1] {
                t.push((c, self.rows[k], self.vals[k]));
            }
        }
        CscMatrix::from_triplets(self.n, t)
    }

    fn to_rsparse(&self) -> rsparse::data::Sprs<f64> {
        rsparse::data::Sprs {
            nzmax: self.nnz(),
            m: self.n,
            n: self.n,
            p: self.colptr.iter().map(|&v| v as isize).collect(),
            i: self.rows.clone(),
            x: self.vals.clone(),
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `a x = b` by sparse LU with partial pivoting and checks the
/// relative residual against `tol`.
pub fn solve(a: &CscMatrix, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    if a.n == 0 {
        return Ok(Vec::new());
    }
    let bn = norm(b);
    if bn == 0.0 {
        return Ok(vec![0.0; a.n]);
    }
    let mut x = b.to_vec();
    rsparse::lusol(&a.to_rsparse(), &mut x, 1, 1.0).map_err(|e| Error::SingularSystem(e.to_string()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem("non-finite solution".into()));
    }
    let r: Vec<f64> = a.mul(&x).iter().zip(b).map(|(ax, bi)| ax - bi).collect();
    let rel = norm(&r) / bn;
    if rel >= tol {
        return Err(Error::InaccurateSolve(rel));
    }
    Ok(x)
}
