//! Compressed sparse row storage and a preconditioned conjugate gradient
//! solver for symmetric positive definite systems.

use crate::scalar::compensated_sum;
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Square matrix from `(row, col, value)` triplets; duplicates are summed
    /// in input order, so the result does not depend on hashing.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        // stable sort keeps the summation order of duplicates fixed
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside {n}x{n}");
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { nrows: n, row_ptr, col_idx, values }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, T::one())).collect())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => T::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (j, a) in self.row(i) {
                acc += a * x[j];
            }
            *yi = acc;
        }
    }

    /// Mutable access for in-place row/column elimination.
    pub(crate) fn row_mut(&mut self, i: usize) -> (&[usize], &mut [T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &mut self.values[r])
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.nrows).all(|i| self.row(i).all(|(j, a)| self.get(j, i) == a))
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    compensated_sum(a.iter().zip(b).map(|(&x, &y)| x * y))
}

fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Solution and diagnostics of an iterative solve.
#[derive(Clone, Debug)]
pub struct CgOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// `‖b - A x‖ / ‖b‖`, recomputed from the returned `x`.
    pub relative_residual: T,
}

/// Jacobi-preconditioned conjugate gradients.
///
/// Converged when the true relative residual `‖b - A x‖ / ‖b‖` is at most
/// `tol`; otherwise [`Error::SolverDiverged`] carries the best residual.
pub fn conjugate_gradient<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    tol: T,
    max_iter: usize,
) -> Result<CgOutcome<T>> {
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: b.len() });
    }
    let bnorm = norm(b);
    if bnorm == T::zero() {
        return Ok(CgOutcome { x: vec![T::zero(); n], iterations: 0, relative_residual: T::zero() });
    }
    let inv_diag: Vec<T> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > T::zero() { T::one() / d } else { T::one() })
        .collect();

    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&ri, &di)| ri * di).collect();
    let mut p = z.clone();
    let mut ap = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    // restart from the true residual periodically to limit drift
    let refresh = 50;

    while iterations < max_iter {
        if norm(&r) <= tol * bnorm {
            let true_res = residual_norm(a, &x, b) / bnorm;
            if true_res <= tol {
                return Ok(CgOutcome { x, iterations, relative_residual: true_res });
            }
            r = residual(a, &x, b);
            z = r.iter().zip(&inv_diag).map(|(&ri, &di)| ri * di).collect();
            p.clone_from(&z);
            rz = dot(&r, &z);
        }
        a.mul_vec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        if iterations % refresh == 0 {
            r = residual(a, &x, b);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = residual_norm(a, &x, b) / bnorm;
    if res <= tol {
        return Ok(CgOutcome { x, iterations, relative_residual: res });
    }
    Err(Error::SolverDiverged { iterations, residual: res.to_f64_lossy() })
}

fn residual<T: Scalar>(a: &CsrMatrix<T>, x: &[T], b: &[T]) -> Vec<T> {
    let mut ax = vec![T::zero(); x.len()];
    a.mul_vec(x, &mut ax);
    b.iter().zip(ax).map(|(&bi, axi)| bi - axi).collect()
}

pub fn residual_norm<T: Scalar>(a: &CsrMatrix<T>, x: &[T], b: &[T]) -> T {
    norm(&residual(a, x, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let a = CsrMatrix::from_triplets(1, vec![(0, 0, 2.0)]);
        let out = conjugate_gradient(&a, &[4.0], 1e-12, 10).unwrap();
        assert_eq!(out.x, vec![2.0]);
    }

    #[test]
    fn identity_returns_rhs() {
        let a = CsrMatrix::<f64>::identity(5);
        let b = [1.0, -2.0, 3.0, 0.5, 0.0];
        let out = conjugate_gradient(&a, &b, 1e-12, 10).unwrap();
        assert_eq!(out.x, b.to_vec());
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_triplets(2, vec![(1, 0, 1.0), (0, 0, 1.0), (0, 0, 2.0), (0, 1, 1.0)]);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.nnz(), 3);
        assert!(a.is_symmetric());
    }

    #[test]
    fn tridiagonal_system() {
        let n = 200;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let out = conjugate_gradient(&a, &b, 1e-12, 10 * n).unwrap();
        assert!(residual_norm(&a, &out.x, &b) / norm(&b) <= 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, t);
        let b = vec![1.0; n];
        match conjugate_gradient(&a, &b, 1e-14, 2) {
            Err(Error::SolverDiverged { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 1e-14);
            }
            other => panic!("{other:?}"),
        }
    }
}
