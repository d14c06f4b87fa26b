use crate::energy::{cotangent_laplacian, stretch_laplacian, AreaMeasure};
use crate::error::Result;
use crate::mesh::TriMesh;
use crate::param::{FreeLayout, ParamMap};
use crate::scalar::{norm_inf, Real};
use crate::sparse::{CsrMatrix, SparseCholesky, SparseLu};

use super::SolverConfig;

#[derive(Debug, Clone)]
pub struct FixedPointResult<T> {
    pub map: ParamMap<T>,
    /// The first solve, with the cotangent Laplacian of the surface.
    pub harmonic: ParamMap<T>,
    /// `||L_II f_I + L_IB f_B||_inf` after every solve.
    pub residuals: Vec<T>,
}

/// Replaces the interior of `f` by the solution of `L_II f_I = -L_IB f_B` for both coordinates.
///
/// Returns the new map and the post-solve residual.
pub fn solve_interior<T: Real>(l: &CsrMatrix<T>, f: &ParamMap<T>, interior: &[usize], boundary: &[usize]) -> Result<(ParamMap<T>, T)> {
    let lii = l.submatrix(interior, interior);
    let lib = l.submatrix(interior, boundary);
    let solve: Box<dyn Fn(&[T]) -> Vec<T>> = match SparseCholesky::factor(&lii) {
        Ok(c) => Box::new(move |b| c.solve(b)),
        Err(_) => {
            let lu = SparseLu::factor(&lii)?;
            Box::new(move |b| lu.solve(b))
        }
    };
    let mut out = f.clone();
    let mut residual = T::zero();
    for s in 0..2 {
        let fb: Vec<T> = boundary.iter().map(|&v| f.coord(s)[v]).collect();
        let rhs: Vec<T> = lib.mul_vec(&fb).into_iter().map(|x| -x).collect();
        let fi = solve(&rhs);
        let r: Vec<T> = lii.mul_vec(&fi).iter().zip(&rhs).map(|(&a, &b)| a - b).collect();
        residual = residual.max(norm_inf(&r));
        for (&v, &x) in interior.iter().zip(&fi) {
            out.coord_mut(s)[v] = x;
        }
    }
    Ok((out, residual))
}

/// Harmonic initial map followed by `cfg.fpm_iters` rounds with the re-assembled stretch Laplacian.
pub fn fixed_point_init<T: Real>(
    mesh: &TriMesh<T>,
    layout: &FreeLayout<T>,
    rho: &AreaMeasure<T>,
    cfg: &SolverConfig<T>,
) -> Result<FixedPointResult<T>> {
    let start = layout.initial_boundary();
    let (interior, boundary) = (layout.interior(), layout.boundary());
    let (harmonic, r0) = solve_interior(&cotangent_laplacian(mesh), &start, interior, boundary)?;
    let mut residuals = vec![r0];
    let mut map = harmonic.clone();
    for _ in 0..cfg.fpm_iters {
        let l = stretch_laplacian(mesh, &map, rho).matrix;
        let (next, r) = solve_interior(&l, &map, interior, boundary)?;
        residuals.push(r);
        map = next;
    }
    Ok(FixedPointResult { map, harmonic, residuals })
}
