//! Jacobi-preconditioned conjugate gradients on a symmetric five-point stencil.

use crate::error::{Error, Result};

pub(crate) const NONE: usize = usize::MAX;

/// Symmetric positive definite matrix with at most four off-diagonal entries per row.
#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    pub diag: Vec<f64>,
    /// `(column, value)` pairs; unused slots hold `(NONE, 0.0)`.
    pub off: Vec<[(usize, f64); 4]>,
}

impl Stencil {
    pub fn new(size: usize) -> Self {
        Stencil {
            diag: vec![0.0; size],
            off: vec![[(NONE, 0.0); 4]; size],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = self.diag[i] * x[i];
            for &(j, a) in &self.off[i] {
                if j != NONE {
                    acc += a * x[j];
                }
            }
            *yi = acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` starting from the contents of `x` until
/// `‖b - A x‖₂ <= tol ‖b‖₂`. Returns the iteration count.
pub(crate) fn solve(a: &Stencil, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<usize> {
    let n = a.len();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let target = tol * b_norm;
    let inv_diag: Vec<f64> = a.diag.iter().map(|d| 1.0 / d).collect();

    let mut r = vec![0.0; n];
    a.apply(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut res = dot(&r, &r).sqrt();

    for it in 0..max_iter {
        if res <= target {
            return Ok(it);
        }
        a.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::Invariant(format!(
                "stencil is not positive definite (pᵀAp = {pq:e})"
            )));
        }
        let step = rz / pq;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * q[i];
        }
        res = dot(&r, &r).sqrt();
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if res <= target {
        return Ok(max_iter);
    }
    Err(Error::LinearSolver {
        iterations: max_iter,
        residual: res / b_norm,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> Stencil {
        let mut a = Stencil::new(n);
        for i in 0..n {
            a.diag[i] = 2.0;
            if i > 0 {
                a.off[i][0] = (i - 1, -1.0);
            }
            if i + 1 < n {
                a.off[i][1] = (i + 1, -1.0);
            }
        }
        a
    }

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let a = laplacian_1d(n);
        let exact: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut b = vec![0.0; n];
        a.apply(&exact, &mut b);
        let mut x = vec![0.0; n];
        let iters = solve(&a, &b, &mut x, 1e-13, 1000).unwrap();
        assert!(iters <= n + 1);
        for (xi, ei) in x.iter().zip(&exact) {
            assert!((xi - ei).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let a = laplacian_1d(5);
        let mut x = vec![1.0; 5];
        assert_eq!(solve(&a, &[0.0; 5], &mut x, 1e-10, 10).unwrap(), 0);
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reports_iteration_budget() {
        let a = laplacian_1d(200);
        let b = vec![1.0; 200];
        let mut x = vec![0.0; 200];
        assert!(matches!(
            solve(&a, &b, &mut x, 1e-14, 3),
            Err(Error::LinearSolver { .. })
        ));
    }
}
