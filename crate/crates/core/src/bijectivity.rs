//! Fold detection and mean-value correction of folded parameterizations.

use crate::energy::{signed_image_area, Laplacian};
use crate::error::{Error, Result};
use crate::geometry::{cross2, dot2, norm2, sub2};
use crate::mesh::TriMesh;
use crate::param::ParamMap;
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, SparseLu};

/// Signed image areas at or below this count as folded.
pub const FOLD_THRESHOLD: f64 = 1e-15;
/// Half-angles are clamped below `pi/2` by this margin.
const HALF_ANGLE_MARGIN: f64 = 1e-9;
const COINCIDENT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldReport {
    pub count: usize,
    pub faces: Vec<usize>,
}

pub fn count_folded<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> FoldReport {
    let thr = T::lit(FOLD_THRESHOLD);
    let faces: Vec<usize> = (0..mesh.n_faces()).filter(|&f| !(signed_image_area(mesh, map, f) > thr)).collect();
    FoldReport { count: faces.len(), faces }
}

/// Mean-value Laplacian of the mapped mesh, with weights `tan(gamma/2) / |f_i - f_j|`.
pub fn mean_value_laplacian<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> Result<Laplacian<T>> {
    let limit = T::lit(std::f64::consts::FRAC_PI_2 - HALF_ANGLE_MARGIN);
    let eps = T::lit(COINCIDENT);
    let n = mesh.n_vertices();
    let mut trip = Vec::with_capacity(mesh.n_faces() * 12);
    let mut clamped = Vec::new();
    for f in 0..mesh.n_faces() {
        let face = mesh.face(f);
        let mut flagged = false;
        for k in 0..3 {
            let (i, j, l) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
            let pi = map.point(i);
            let a = sub2(map.point(j), pi);
            let b = sub2(map.point(l), pi);
            let (ra, rb) = (norm2(a), norm2(b));
            if ra <= eps {
                return Err(Error::CoincidentVertices { a: i.min(j), b: i.max(j) });
            }
            if rb <= eps {
                return Err(Error::CoincidentVertices { a: i.min(l), b: i.max(l) });
            }
            let mut half = cross2(a, b).abs().atan2(dot2(a, b)) / T::lit(2.0);
            if half > limit {
                half = limit;
                flagged = true;
            }
            let t = half.tan();
            for (other, r) in [(j, ra), (l, rb)] {
                let w = t / r;
                trip.push((i, other, -w));
                trip.push((i, i, w));
            }
        }
        if flagged {
            clamped.push(f);
        }
    }
    Ok(Laplacian { matrix: CsrMatrix::from_triplets(n, n, &trip), clamped })
}

#[derive(Debug, Clone)]
pub struct Correction<T> {
    pub map: ParamMap<T>,
    /// Folds before and after.
    pub folds_before: usize,
    pub folds_after: usize,
    /// Whether the interior was re-solved.
    pub applied: bool,
    pub clamped_faces: Vec<usize>,
}

/// Re-solves the interior with row-normalized mean-value weights when the map has folds.
///
/// Boundary coordinates are copied unchanged. With `force`, the correction runs
/// even on fold-free maps.
pub fn correct_overlaps<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>, force: bool) -> Result<Correction<T>> {
    let before = count_folded(mesh, map).count;
    if before == 0 && !force {
        return Ok(Correction { map: map.clone(), folds_before: 0, folds_after: 0, applied: false, clamped_faces: Vec::new() });
    }
    let lm = mean_value_laplacian(mesh, map)?;
    let diag = lm.matrix.diag();
    let inv: Vec<T> = diag.iter().map(|&d| T::one() / d).collect();
    let normalized = lm.matrix.scale_rows(&inv);

    let mask = mesh.boundary_mask();
    let interior: Vec<usize> = (0..mesh.n_vertices()).filter(|&v| !mask[v]).collect();
    let boundary: Vec<usize> = (0..mesh.n_vertices()).filter(|&v| mask[v]).collect();
    let lii = normalized.submatrix(&interior, &interior);
    let lib = normalized.submatrix(&interior, &boundary);
    let lu = SparseLu::factor(&lii)?;
    let mut out = map.clone();
    for s in 0..2 {
        let fb: Vec<T> = boundary.iter().map(|&v| map.coord(s)[v]).collect();
        let rhs: Vec<T> = lib.mul_vec(&fb).into_iter().map(|x| -x).collect();
        for (&v, x) in interior.iter().zip(lu.solve(&rhs)) {
            out.coord_mut(s)[v] = x;
        }
    }
    let after = count_folded(mesh, &out).count;
    Ok(Correction { map: out, folds_before: before, folds_after: after, applied: true, clamped_faces: lm.clamped })
}
