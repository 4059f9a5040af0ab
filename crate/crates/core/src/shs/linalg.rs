//! Dense LU and a sparse Krylov solver, sized for the SHS systems.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major dense matrix with an in-place LU factorisation.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn add(&mut self, row: usize, col: usize, x: f64) {
        self.data[row * self.n + col] += x;
    }

    pub fn set_row(&mut self, row: usize, x: f64) {
        self.data[row * self.n..(row + 1) * self.n].fill(x);
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(mut self, mut b: Vec<f64>) -> Result<Vec<f64>> {
        let n = self.n;
        let a = &mut self.data;
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .expect("non-empty range");
            if a[pivot * n + col].abs() <= scale * 1e-14 {
                return Err(Error::Singular(format!("zero pivot in column {col}")));
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                b.swap(col, pivot);
            }
            let diag = a[col * n + col];
            for row in col + 1..n {
                let f = a[row * n + col] / diag;
                if f == 0.0 {
                    continue;
                }
                a[row * n + col] = 0.0;
                for k in col + 1..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
        for row in (0..n).rev() {
            let mut s = b[row];
            for k in row + 1..n {
                s -= a[row * n + k] * b[k];
            }
            b[row] = s / a[row * n + row];
        }
        Ok(b)
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_into(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *o = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|row| {
                (self.row_ptr[row]..self.row_ptr[row + 1])
                    .find(|&k| self.cols[k] == row)
                    .map_or(0.0, |k| self.vals[k])
            })
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for row in 0..self.n {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                d.add(row, self.cols[k], self.vals[k]);
            }
        }
        d
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Iteration limits for the sparse solvers.
#[derive(Debug, Clone, Copy)]
pub struct IterativeOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_iter: 20_000,
        }
    }
}

/// Jacobi-preconditioned BiCGSTAB, falling back to plain Jacobi sweeps on
/// breakdown.
pub fn solve_sparse(a: &CsrMatrix, b: &[f64], opts: IterativeOptions) -> Result<Vec<f64>> {
    let diag = a.diagonal();
    if diag.contains(&0.0) {
        return Err(Error::Singular("zero diagonal entry".into()));
    }
    match bicgstab(a, b, &diag, opts) {
        Ok(x) => Ok(x),
        Err(Error::NotConverged { .. }) | Err(Error::Singular(_)) => jacobi(a, b, &diag, opts),
        Err(e) => Err(e),
    }
}

fn bicgstab(a: &CsrMatrix, b: &[f64], diag: &[f64], opts: IterativeOptions) -> Result<Vec<f64>> {
    let n = a.dim();
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let target = opts.rel_tol * b_norm;
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut t = vec![0.0; n];
    for it in 0..opts.max_iter {
        let rho_next = dot(&r_hat, &r);
        if rho_next == 0.0 || !rho_next.is_finite() {
            return Err(Error::Singular("BiCGSTAB breakdown".into()));
        }
        let beta = (rho_next / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = p[i] / diag[i];
        }
        a.mul_into(&y, &mut v);
        let denom = dot(&r_hat, &v);
        if denom == 0.0 {
            return Err(Error::Singular("BiCGSTAB breakdown".into()));
        }
        alpha = rho_next / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) <= target {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return Ok(x);
        }
        for i in 0..n {
            z[i] = s[i] / diag[i];
        }
        a.mul_into(&z, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return Err(Error::Singular("BiCGSTAB breakdown".into()));
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        let res = norm(&r);
        if res <= target {
            return Ok(x);
        }
        if omega == 0.0 {
            return Err(Error::NotConverged {
                iterations: it + 1,
                residual: res / b_norm,
            });
        }
        rho = rho_next;
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual: norm(&r) / b_norm,
    })
}

fn jacobi(a: &CsrMatrix, b: &[f64], diag: &[f64], opts: IterativeOptions) -> Result<Vec<f64>> {
    let n = a.dim();
    let b_norm = norm(b);
    let mut x: Vec<f64> = b.iter().zip(diag).map(|(bi, d)| bi / d).collect();
    let mut ax = vec![0.0; n];
    let max_iter = opts.max_iter * 50;
    let mut res = f64::INFINITY;
    for _ in 0..max_iter {
        a.mul_into(&x, &mut ax);
        let mut r2 = 0.0;
        for i in 0..n {
            let r = b[i] - ax[i];
            r2 += r * r;
            x[i] += r / diag[i];
        }
        res = libm::sqrt(r2);
        if res <= opts.rel_tol * b_norm {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: res / b_norm,
    })
}
