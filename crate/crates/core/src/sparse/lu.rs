use std::collections::BTreeSet;

use super::{invert_permutation, minimum_degree, CsrMatrix, FactorError};
use crate::scalar::Real;

/// Sparse LU factorization without pivoting, `P A P^T = L U` with unit-diagonal `L`.
///
/// Suited to diagonally dominant or M-matrix systems such as Laplacians with
/// nonsymmetric weights.
#[derive(Debug, Clone)]
pub struct SparseLu<T> {
    n: usize,
    perm: Vec<usize>,
    lower: Vec<Vec<(usize, T)>>,
    upper: Vec<Vec<(usize, T)>>,
}

impl<T: Real> SparseLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self, FactorError> {
        if a.rows() != a.cols() {
            return Err(FactorError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let perm = minimum_degree(&a.symmetric_pattern());
        Self::factor_with_ordering(a, perm)
    }

    pub fn factor_with_ordering(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self, FactorError> {
        let n = a.rows();
        if perm.len() != n {
            return Err(FactorError::DimensionMismatch { expected: n, found: perm.len() });
        }
        let inv = invert_permutation(&perm);
        let mut lower: Vec<Vec<(usize, T)>> = Vec::with_capacity(n);
        let mut upper: Vec<Vec<(usize, T)>> = Vec::with_capacity(n);
        let mut w = vec![T::zero(); n];
        for i in 0..n {
            let mut pattern = BTreeSet::new();
            let (idx, val) = a.row(perm[i]);
            for (&c, &v) in idx.iter().zip(val) {
                let j = inv[c];
                w[j] += v;
                pattern.insert(j);
            }
            let mut lrow = Vec::new();
            let mut cursor = 0;
            while let Some(&k) = pattern.range(cursor..i).next() {
                cursor = k + 1;
                let lik = w[k] / upper[k][0].1;
                w[k] = T::zero();
                for &(j, u) in &upper[k][1..] {
                    pattern.insert(j);
                    w[j] -= lik * u;
                }
                lrow.push((k, lik));
            }
            let urow: Vec<(usize, T)> = pattern
                .range(i..)
                .map(|&j| {
                    let v = w[j];
                    w[j] = T::zero();
                    (j, v)
                })
                .collect();
            match urow.first() {
                Some(&(j, d)) if j == i && d != T::zero() && d.is_finite() => {}
                _ => return Err(FactorError::ZeroPivot { row: perm[i] }),
            }
            lower.push(lrow);
            upper.push(urow);
        }
        Ok(Self { n, perm, lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..self.n {
            let mut s = y[i];
            for &(k, l) in &self.lower[i] {
                s -= l * y[k];
            }
            y[i] = s;
        }
        for i in (0..self.n).rev() {
            let row = &self.upper[i];
            let mut s = y[i];
            for &(j, u) in &row[1..] {
                s -= u * y[j];
            }
            y[i] = s / row[0].1;
        }
        let mut out = vec![T::zero(); self.n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = y[k];
        }
        out
    }
}
