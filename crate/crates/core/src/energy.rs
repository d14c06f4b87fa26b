//! Stretch and authalic energies, the measure-weighted stretch Laplacian, and area-ratio statistics.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot2, signed_area2, sub2};
use crate::mesh::TriMesh;
use crate::param::{FreeLayout, ParamMap};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

/// Smallest image area used inside cotangent weights.
pub const MIN_IMAGE_AREA: f64 = 1e-14;
/// Largest cotangent magnitude admitted into the Laplacian.
pub const MAX_COT: f64 = 1e8;

/// Positive per-face measure `rho` dividing the squared image areas.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaMeasure<T>(pub Vec<T>);

impl<T: Real> AreaMeasure<T> {
    /// Source face areas; recovers the classical stretch energy.
    pub fn face_areas(mesh: &TriMesh<T>) -> Self {
        Self(mesh.face_areas())
    }

    /// Uniform measure `|M| / m`, whose total equals the surface area.
    pub fn constant(mesh: &TriMesh<T>) -> Self {
        Self(vec![mesh.total_area() / T::of_usize(mesh.n_faces()); mesh.n_faces()])
    }

    pub fn validate(&self, n_faces: usize) -> Result<()> {
        if self.0.len() != n_faces {
            return Err(Error::InvalidConfig(format!("measure has {} entries for {n_faces} faces", self.0.len())));
        }
        if let Some(f) = self.0.iter().position(|r| !(r.is_finite() && *r > T::zero())) {
            return Err(Error::InvalidConfig(format!("measure on face {f} is not positive and finite")));
        }
        Ok(())
    }
}

/// A weighted Laplacian with the faces whose weights needed clamping.
#[derive(Debug, Clone)]
pub struct Laplacian<T> {
    pub matrix: CsrMatrix<T>,
    pub clamped: Vec<usize>,
}

/// Signed image area of face `f` under its stored orientation.
#[inline]
pub fn signed_image_area<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>, face: usize) -> T {
    let [a, b, c] = mesh.face(face);
    signed_area2(map.point(a), map.point(b), map.point(c))
}

pub fn image_face_areas<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> Vec<T> {
    (0..mesh.n_faces()).map(|f| signed_image_area(mesh, map, f).abs()).collect()
}

/// Total unsigned image area.
pub fn image_area<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> T {
    image_face_areas(mesh, map).into_iter().sum()
}

/// Assembles `L_S(f)` with off-diagonal `-cot(theta)/2 * |f(tau)| / rho(tau)`, summed over faces.
pub fn stretch_laplacian<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>, rho: &AreaMeasure<T>) -> Laplacian<T> {
    let min_area = T::lit(MIN_IMAGE_AREA);
    let max_cot = T::lit(MAX_COT);
    let per_face: Vec<([(usize, usize, T); 3], bool)> = (0..mesh.n_faces())
        .into_par_iter()
        .map(|f| {
            let face = mesh.face(f);
            let p = face.map(|v| map.point(v));
            let area = signed_area2(p[0], p[1], p[2]).abs();
            let mut clamped = area < min_area;
            let area = area.max(min_area);
            let mut out = [(0, 0, T::zero()); 3];
            for k in 0..3 {
                let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                let d = dot2(sub2(p[i], p[k]), sub2(p[j], p[k]));
                let mut cot = d / (T::lit(2.0) * area);
                if cot.abs() > max_cot {
                    cot = cot.signum() * max_cot;
                    clamped = true;
                }
                out[k] = (face[i], face[j], cot / T::lit(2.0) * area / rho.0[f]);
            }
            (out, clamped)
        })
        .collect();
    let n = mesh.n_vertices();
    let mut trip = Vec::with_capacity(mesh.n_faces() * 12);
    let mut clamped = Vec::new();
    for (f, (edges, c)) in per_face.iter().enumerate() {
        if *c {
            clamped.push(f);
        }
        for &(i, j, w) in edges {
            trip.push((i, j, -w));
            trip.push((j, i, -w));
            trip.push((i, i, w));
            trip.push((j, j, w));
        }
    }
    Laplacian { matrix: CsrMatrix::from_triplets(n, n, &trip), clamped }
}

/// Classical cotangent Laplacian of the surface, `L_S(id)` with unit area ratios.
pub fn cotangent_laplacian<T: Real>(mesh: &TriMesh<T>) -> CsrMatrix<T> {
    let n = mesh.n_vertices();
    let mut trip = Vec::with_capacity(mesh.n_faces() * 12);
    for f in 0..mesh.n_faces() {
        let face = mesh.face(f);
        let p = face.map(|v| mesh.vertex(v));
        let area = mesh.face_area(f);
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let a = crate::geometry::sub3(p[i], p[k]);
            let b = crate::geometry::sub3(p[j], p[k]);
            let w = crate::geometry::dot3(a, b) / (T::lit(4.0) * area);
            let (vi, vj) = (face[i], face[j]);
            trip.push((vi, vj, -w));
            trip.push((vj, vi, -w));
            trip.push((vi, vi, w));
            trip.push((vj, vj, w));
        }
    }
    CsrMatrix::from_triplets(n, n, &trip)
}

/// `sum_tau |f(tau)|^2 / rho(tau)`.
pub fn stretch_energy<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>, rho: &AreaMeasure<T>) -> T {
    (0..mesh.n_faces())
        .map(|f| {
            let a = signed_image_area(mesh, map, f);
            a * a / rho.0[f]
        })
        .sum()
}

/// `1/2 sum_s f_s^T L f_s`.
pub fn quadratic_form<T: Real>(l: &CsrMatrix<T>, map: &ParamMap<T>) -> T {
    let half = T::lit(0.5);
    [&map.u, &map.v].iter().map(|f| half * crate::scalar::dot(f, &l.mul_vec(f))).sum()
}

/// `E_A = (|M| / A(f)) E_S(f) - A(f)` with `rho = |tau|`.
pub fn authalic_energy<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> Result<T> {
    let image = image_area(mesh, map);
    if !(image > T::zero()) {
        return Err(Error::ZeroImageArea);
    }
    let es = stretch_energy(mesh, map, &AreaMeasure::face_areas(mesh));
    Ok(mesh.total_area() / image * es - image)
}

/// Area-ratio distribution of a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStats<T> {
    pub weighted_mean: T,
    pub weighted_variance: T,
    pub unweighted_mean: T,
    pub unweighted_variance: T,
    pub r_area_mean: T,
    pub r_area_sd: T,
    pub min_face_area: T,
    pub image_area: T,
    pub authalic_energy: T,
    /// Upper bound on the unweighted variance, `A(f) E_A / (m |M| min|tau|)`.
    pub variance_bound: T,
}

pub fn ratio_statistics<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>) -> Result<RatioStats<T>> {
    let areas = mesh.face_areas();
    let image = image_face_areas(mesh, map);
    let total = mesh.total_area();
    let image_total: T = image.iter().copied().sum();
    if !(image_total > T::zero()) {
        return Err(Error::ZeroImageArea);
    }
    let m = T::of_usize(mesh.n_faces());
    let ratio: Vec<T> = image.iter().zip(&areas).map(|(&a, &s)| a / s).collect();

    let weighted_mean = image_total / total;
    let weighted_variance = ratio
        .iter()
        .zip(&areas)
        .map(|(&r, &s)| s / total * (r - weighted_mean) * (r - weighted_mean))
        .sum();
    let unweighted_mean = ratio.iter().copied().sum::<T>() / m;
    let unweighted_variance =
        ratio.iter().map(|&r| (r - unweighted_mean) * (r - unweighted_mean)).sum::<T>() / m;
    let r_area: Vec<T> = image.iter().zip(&areas).map(|(&a, &s)| (a / image_total) / (s / total)).collect();
    let r_area_mean = r_area.iter().copied().sum::<T>() / m;
    let r_area_sd = (r_area.iter().map(|&r| (r - r_area_mean) * (r - r_area_mean)).sum::<T>() / m).sqrt();
    let min_face_area = areas.iter().copied().fold(T::infinity(), T::min);
    let es: T = image.iter().zip(&areas).map(|(&a, &s)| a * a / s).sum();
    let authalic = total / image_total * es - image_total;
    Ok(RatioStats {
        weighted_mean,
        weighted_variance,
        unweighted_mean,
        unweighted_variance,
        r_area_mean,
        r_area_sd,
        min_face_area,
        image_area: image_total,
        authalic_energy: authalic,
        variance_bound: image_total * authalic / (m * total * min_face_area),
    })
}

/// Energy and free-variable gradient of `E_S`, reduced through the boundary constraints.
#[derive(Debug, Clone)]
pub struct EnergyEval<T> {
    pub energy: T,
    pub gradient: Vec<T>,
    pub clamped: Vec<usize>,
}

/// Full per-vertex gradients `2 L_S(f) f^s`.
pub fn vertex_gradient<T: Real>(mesh: &TriMesh<T>, map: &ParamMap<T>, rho: &AreaMeasure<T>) -> (Vec<T>, Vec<T>, Vec<usize>) {
    let l = stretch_laplacian(mesh, map, rho);
    let two = T::lit(2.0);
    let gu = l.matrix.mul_vec(&map.u).into_iter().map(|x| two * x).collect();
    let gv = l.matrix.mul_vec(&map.v).into_iter().map(|x| two * x).collect();
    (gu, gv, l.clamped)
}

pub fn gradient<T: Real>(
    mesh: &TriMesh<T>,
    map: &ParamMap<T>,
    rho: &AreaMeasure<T>,
    layout: &FreeLayout<T>,
) -> Result<Vec<T>> {
    layout.check(map, T::lit(1e-9))?;
    let (gu, gv, _) = vertex_gradient(mesh, map, rho);
    Ok(layout.reduce_gradient(&gu, &gv))
}

/// Energy and reduced gradient at `x` in free-variable coordinates.
pub fn evaluate<T: Real>(mesh: &TriMesh<T>, layout: &FreeLayout<T>, rho: &AreaMeasure<T>, x: &[T]) -> EnergyEval<T> {
    let map = layout.scatter(x);
    let (gu, gv, clamped) = vertex_gradient(mesh, &map, rho);
    EnergyEval { energy: stretch_energy(mesh, &map, rho), gradient: layout.reduce_gradient(&gu, &gv), clamped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate;

    fn identity(mesh: &TriMesh<f64>) -> ParamMap<f64> {
        ParamMap { u: mesh.vertices().iter().map(|p| p[0]).collect(), v: mesh.vertices().iter().map(|p| p[1]).collect() }
    }

    #[test]
    fn equilateral_off_diagonals() {
        let h = 3.0_f64.sqrt() / 2.0;
        let m = TriMesh::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]], vec![[0, 1, 2]]).unwrap();
        let l = stretch_laplacian(&m, &identity(&m), &AreaMeasure::face_areas(&m)).matrix;
        let want = -1.0 / (2.0 * 3.0_f64.sqrt());
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert!((l.get(i, j) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_matches_cotangent_laplacian() {
        let m = generate::flat_grid::<f64>(4, 3);
        let ls = stretch_laplacian(&m, &identity(&m), &AreaMeasure::face_areas(&m)).matrix;
        let lc = cotangent_laplacian(&m);
        for i in 0..m.n_vertices() {
            for j in 0..m.n_vertices() {
                assert!((ls.get(i, j) - lc.get(i, j)).abs() < 1e-12);
            }
        }
        for (r, s) in ls.row_sums().iter().zip(ls.diag()) {
            assert!(r.abs() <= 1e-12 * s.abs());
        }
    }

    #[test]
    fn laplacian_scales_quadratically() {
        let m = generate::flat_grid::<f64>(3, 3);
        let f = identity(&m);
        let g = ParamMap { u: f.u.iter().map(|x| 2.0 * x).collect(), v: f.v.iter().map(|x| 2.0 * x).collect() };
        let rho = AreaMeasure::face_areas(&m);
        let a = stretch_laplacian(&m, &f, &rho).matrix;
        let b = stretch_laplacian(&m, &g, &rho).matrix;
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((4.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn stretch_energy_examples() {
        let m = generate::flat_grid::<f64>(5, 5);
        let f = identity(&m);
        assert!((stretch_energy(&m, &f, &AreaMeasure::face_areas(&m)) - 1.0).abs() < 1e-14);
        let t = TriMesh::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 2]]).unwrap();
        assert!((stretch_energy(&t, &identity(&t), &AreaMeasure(vec![0.25])) - 1.0).abs() < 1e-15);
        assert!((image_area(&t, &identity(&t)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_face_authalic_energy() {
        let m = generate::flat_grid::<f64>(1, 1);
        // Faces [0,1,3] and [0,3,2]; moving vertex 1 inward shrinks the first face only.
        let mut f = identity(&m);
        f.u[1] = 0.5;
        f.v[1] = 0.0;
        // Images: [0,1,3] -> (0,0),(0.5,0),(1,1) area 0.25; [0,3,2] area 0.5.
        let es = stretch_energy(&m, &f, &AreaMeasure::face_areas(&m));
        let a = image_area(&m, &f);
        assert!((a - 0.75).abs() < 1e-15);
        assert!((es - 2.0 * (0.25f64.powi(2) + 0.5f64.powi(2))).abs() < 1e-15);
        let ea = authalic_energy(&m, &f).unwrap();
        assert!((ea - (es / a - a)).abs() < 1e-15);

        let mut g = identity(&m);
        g.u[2] = 0.0;
        g.v[2] = 0.5;
        g.u[1] = 1.5;
        g.v[1] = 0.0;
        // Image areas 0.75 and 0.25 over a unit square domain of two 0.5 faces.
        let areas = image_face_areas(&m, &g);
        assert!((areas[0] - 0.75).abs() < 1e-15 && (areas[1] - 0.25).abs() < 1e-15);
        assert!((stretch_energy(&m, &g, &AreaMeasure::face_areas(&m)) - 1.25).abs() < 1e-15);
        assert!((authalic_energy(&m, &g).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn folded_pair_area_doubles() {
        let m = generate::flat_grid::<f64>(1, 1);
        let mut f = identity(&m);
        f.u[2] = 1.0;
        f.v[2] = 0.0;
        // Faces [0,1,3] and [0,3,2] now both cover the triangle (0,0),(1,0),(1,1).
        assert!((image_area(&m, &f) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn area_preserving_statistics() {
        let m = generate::flat_grid::<f64>(4, 4);
        let s = ratio_statistics(&m, &identity(&m)).unwrap();
        assert!(s.weighted_variance.abs() < 1e-15);
        assert!(s.unweighted_variance.abs() < 1e-15);
        assert!((s.r_area_mean - 1.0).abs() < 1e-14);
        assert!(s.r_area_sd < 1e-7);
        assert!(s.authalic_energy.abs() < 1e-12);
    }
}
