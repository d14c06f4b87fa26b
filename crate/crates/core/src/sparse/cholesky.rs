use super::{invert_permutation, minimum_degree, CsrMatrix, FactorError};
use crate::scalar::Real;

const NONE: usize = usize::MAX;

/// Up-looking sparse Cholesky factorization `P A P^T = L L^T`.
///
/// `perm[k]` is the original index placed at position `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCholesky<T> {
    n: usize,
    perm: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> SparseCholesky<T> {
    /// Factors a symmetric matrix after a minimum-degree reordering.
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self, FactorError> {
        if a.rows() != a.cols() {
            return Err(FactorError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let perm = minimum_degree(&a.symmetric_pattern());
        Self::factor_with_ordering(a, perm)
    }

    pub fn factor_with_ordering(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self, FactorError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(FactorError::NotSquare { rows: n, cols: a.cols() });
        }
        if perm.len() != n {
            return Err(FactorError::DimensionMismatch { expected: n, found: perm.len() });
        }
        let inv = invert_permutation(&perm);
        // Upper triangle of the permuted matrix, by column.
        let upper: Vec<Vec<(usize, T)>> = (0..n)
            .map(|k| {
                let (idx, val) = a.row(perm[k]);
                idx.iter()
                    .zip(val)
                    .map(|(&c, &v)| (inv[c], v))
                    .filter(|&(i, _)| i <= k)
                    .collect()
            })
            .collect();

        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for k in 0..n {
            for &(i0, _) in &upper[k] {
                let mut i = i0;
                while i != NONE && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == NONE {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        let mut x = vec![T::zero(); n];
        let mut mark = vec![NONE; n];
        let mut stack = vec![0usize; n];
        let mut path = Vec::with_capacity(n);
        for k in 0..n {
            let mut top = n;
            mark[k] = k;
            for &(i0, v) in &upper[k] {
                x[i0] += v;
                let mut i = i0;
                path.clear();
                while mark[i] != k {
                    path.push(i);
                    mark[i] = k;
                    i = parent[i];
                }
                while let Some(p) = path.pop() {
                    top -= 1;
                    stack[top] = p;
                }
            }
            let mut d = x[k];
            x[k] = T::zero();
            for &i in &stack[top..n] {
                let lki = x[i] / cols[i][0].1;
                x[i] = T::zero();
                for &(r, l) in &cols[i][1..] {
                    x[r] -= l * lki;
                }
                d -= lki * lki;
                cols[i].push((k, lki));
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(FactorError::NotPositiveDefinite { pivot: perm[k] });
            }
            cols[k].push((k, d.sqrt()));
        }

        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for c in cols {
            for (r, v) in c {
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Ok(Self { n, perm, col_ptr, row_idx, vals })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// The lower-triangular factor in permuted indices.
    pub fn lower(&self) -> CsrMatrix<T> {
        let mut trip = Vec::with_capacity(self.vals.len());
        for j in 0..self.n {
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                trip.push((self.row_idx[p], j, self.vals[p]));
            }
        }
        CsrMatrix::from_triplets(self.n, self.n, &trip)
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..self.n {
            let (a, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
            y[j] /= self.vals[a];
            let yj = y[j];
            for p in a + 1..e {
                y[self.row_idx[p]] -= self.vals[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let (a, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
            let mut s = y[j];
            for p in a + 1..e {
                s -= self.vals[p] * y[self.row_idx[p]];
            }
            y[j] = s / self.vals[a];
        }
        let mut out = vec![T::zero(); self.n];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = y[k];
        }
        out
    }
}
