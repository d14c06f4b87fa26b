use std::ops::Range;

use crate::energy::{stretch_laplacian, AreaMeasure};
use crate::error::Result;
use crate::mesh::TriMesh;
use crate::param::{FreeLayout, ParamMap};
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, FactorError, SparseCholesky};

#[derive(Debug, Clone)]
struct Block<T> {
    matrix: CsrMatrix<T>,
    factor: Option<SparseCholesky<T>>,
}

impl<T: Real> Block<T> {
    /// Factors `a`, adding a growing multiple of `|diag(a)|` until it is positive definite.
    fn new(a: CsrMatrix<T>) -> Result<(Self, bool)> {
        if a.rows() == 0 {
            return Ok((Self { matrix: a, factor: None }, false));
        }
        match SparseCholesky::factor(&a) {
            Ok(c) => return Ok((Self { matrix: a, factor: Some(c) }, false)),
            Err(FactorError::NotPositiveDefinite { .. }) => {}
            Err(e) => return Err(e.into()),
        }
        let diag = a.diag();
        let scale = diag.iter().fold(T::zero(), |m, d| m.max(d.abs())).max(T::min_positive_value());
        let mut eps = T::lit(1e-10);
        loop {
            let shift: Vec<T> = diag.iter().map(|d| eps * d.abs().max(scale * T::lit(1e-12))).collect();
            let shifted = a.add_diagonal(&shift);
            match SparseCholesky::factor(&shifted) {
                Ok(c) => return Ok((Self { matrix: shifted, factor: Some(c) }, true)),
                Err(FactorError::NotPositiveDefinite { .. }) if eps < T::lit(1e3) => {
                    eps *= T::lit(100.0);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

/// Block-diagonal preconditioner `diag(L_II, L_II, L_EE, L_FF)` from `L_S(f0)`, factored once.
#[derive(Debug, Clone)]
pub struct Preconditioner<T> {
    interior: Block<T>,
    e: Block<T>,
    f: Block<T>,
    ranges: [Range<usize>; 4],
    /// At least one block needed a diagonal shift to become positive definite.
    pub regularized: bool,
}

pub fn build_preconditioner<T: Real>(
    mesh: &TriMesh<T>,
    f0: &ParamMap<T>,
    layout: &FreeLayout<T>,
    rho: &AreaMeasure<T>,
) -> Result<Preconditioner<T>> {
    let l = stretch_laplacian(mesh, f0, rho).matrix;
    Preconditioner::from_blocks(
        [
            l.submatrix(layout.interior(), layout.interior()),
            l.submatrix(layout.e_inner(), layout.e_inner()),
            l.submatrix(layout.f_inner(), layout.f_inner()),
        ],
        layout,
    )
}

impl<T: Real> Preconditioner<T> {
    /// Factors the interior, `E` and `F` blocks laid out as in `layout`.
    pub fn from_blocks(blocks: [CsrMatrix<T>; 3], layout: &FreeLayout<T>) -> Result<Self> {
        let ranges = layout.blocks();
        let [bi, be, bf] = blocks;
        for (b, r) in [(&bi, &ranges[0]), (&be, &ranges[2]), (&bf, &ranges[3])] {
            if b.rows() != r.len() || b.cols() != r.len() {
                return Err(FactorError::DimensionMismatch { expected: r.len(), found: b.rows() }.into());
            }
        }
        let (interior, ri) = Block::new(bi)?;
        let (e, re) = Block::new(be)?;
        let (f, rf) = Block::new(bf)?;
        Ok(Self { interior, e, f, ranges, regularized: ri || re || rf })
    }

    fn blocks(&self) -> [(&Block<T>, Range<usize>); 4] {
        let [a, b, c, d] = self.ranges.clone();
        [(&self.interior, a), (&self.interior, b), (&self.e, c), (&self.f, d)]
    }

    /// Solves `M h = g`.
    pub fn apply(&self, g: &[T]) -> Vec<T> {
        let mut h = vec![T::zero(); g.len()];
        for (block, r) in self.blocks() {
            if let Some(c) = &block.factor {
                h[r.clone()].copy_from_slice(&c.solve(&g[r]));
            }
        }
        h
    }

    pub fn multiply(&self, h: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); h.len()];
        for (block, r) in self.blocks() {
            if block.matrix.rows() > 0 {
                g[r.clone()].copy_from_slice(&block.matrix.mul_vec(&h[r]));
            }
        }
        g
    }

    /// Fill-reducing permutations of the interior, `E` and `F` blocks.
    pub fn permutations(&self) -> [Vec<usize>; 3] {
        let p = |b: &Block<T>| b.factor.as_ref().map(|c| c.perm().to_vec()).unwrap_or_default();
        [p(&self.interior), p(&self.e), p(&self.f)]
    }

    /// Lower factors and the matrices they factor, for inspection.
    pub fn factors(&self) -> Vec<(&CsrMatrix<T>, Option<&SparseCholesky<T>>)> {
        [&self.interior, &self.e, &self.f].iter().map(|b| (&b.matrix, b.factor.as_ref())).collect()
    }
}
