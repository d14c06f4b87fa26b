use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mesh::TriMesh;
use crate::param::{FreeLayout, ParamMap};
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, SparseCholesky, SparseLu};

/// Per-face Beltrami coefficients of a map between two parameterizations.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiField<T> {
    pub mu: Vec<Complex<T>>,
}

impl<T: Real> BeltramiField<T> {
    pub fn max_norm(&self) -> T {
        self.mu.iter().map(|m| m.norm()).fold(T::zero(), T::max)
    }
}

fn jacobian<T: Real>(from: [[T; 2]; 3], to: [[T; 2]; 3]) -> Option<[[T; 2]; 2]> {
    let (p1, p2) = ([from[1][0] - from[0][0], from[1][1] - from[0][1]], [from[2][0] - from[0][0], from[2][1] - from[0][1]]);
    let (q1, q2) = ([to[1][0] - to[0][0], to[1][1] - to[0][1]], [to[2][0] - to[0][0], to[2][1] - to[0][1]]);
    let det = p1[0] * p2[1] - p2[0] * p1[1];
    let scale = (p1[0] * p1[0] + p1[1] * p1[1]).max(p2[0] * p2[0] + p2[1] * p2[1]);
    if !(det.abs() > T::lit(1e-14) * scale) {
        return None;
    }
    // J = Q P^-1 with P = [p1 p2], Q = [q1 q2] as columns.
    let inv = [[p2[1] / det, -p2[0] / det], [-p1[1] / det, p1[0] / det]];
    let mut j = [[T::zero(); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            j[r][c] = q1[r] * inv[0][c] + q2[r] * inv[1][c];
        }
    }
    Some(j)
}

/// `mu = f_zbar / f_z` of the affine map taking each `from` triangle onto its `to` triangle.
pub fn beltrami_coefficient<T: Real>(mesh: &TriMesh<T>, from: &ParamMap<T>, to: &ParamMap<T>) -> Result<BeltramiField<T>> {
    let half = T::lit(0.5);
    let mut mu = Vec::with_capacity(mesh.n_faces());
    for f in 0..mesh.n_faces() {
        let face = mesh.face(f);
        let j = jacobian(face.map(|v| from.point(v)), face.map(|v| to.point(v))).ok_or(Error::DegenerateSource { face: f })?;
        let a = (j[0][0] + j[1][1]) * half;
        let b = (j[1][0] - j[0][1]) * half;
        let c = (j[0][0] - j[1][1]) * half;
        let d = (j[1][0] + j[0][1]) * half;
        mu.push(Complex::new(c, d) / Complex::new(a, b));
    }
    Ok(BeltramiField { mu })
}

/// Caps `|mu|` at `delta`, keeping the argument.
///
/// Values already within a few ulps of `delta` are left alone so that the
/// operation is idempotent in floating point.
pub fn truncate<T: Real>(field: &BeltramiField<T>, delta: T) -> Result<BeltramiField<T>> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::InvalidConfig(format!("truncation threshold {delta} must lie in (0, 1)")));
    }
    let keep = delta * (T::one() + T::lit(8.0) * T::epsilon());
    let mu = field
        .mu
        .iter()
        .map(|&m| {
            let r = m.norm();
            if r <= keep {
                m
            } else {
                m * (delta / r)
            }
        })
        .collect();
    Ok(BeltramiField { mu })
}

/// Stiffness matrix of `div(A grad u)` on the `from` triangulation, where `A` is the
/// coefficient matrix of the Beltrami equation with coefficient `mu`.
pub fn beltrami_stiffness<T: Real>(mesh: &TriMesh<T>, from: &ParamMap<T>, field: &BeltramiField<T>) -> Result<CsrMatrix<T>> {
    let (one, two) = (T::one(), T::lit(2.0));
    let n = mesh.n_vertices();
    let mut trip = Vec::with_capacity(mesh.n_faces() * 9);
    for f in 0..mesh.n_faces() {
        let m = field.mu[f];
        let norm = m.norm();
        if !(norm < one) {
            return Err(Error::NotQuasiconformal { face: f, magnitude: norm.as_f64() });
        }
        let (rho, tau) = (m.re, m.im);
        let s = one / (one - norm * norm);
        let a = [
            [s * ((one - rho) * (one - rho) + tau * tau), -two * tau * s],
            [-two * tau * s, s * ((one + rho) * (one + rho) + tau * tau)],
        ];
        let face = mesh.face(f);
        let p = face.map(|v| from.point(v));
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if !(area2.abs() > T::min_positive_value()) {
            return Err(Error::DegenerateSource { face: f });
        }
        let grad: [[T; 2]; 3] = [0, 1, 2].map(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            [-(p[j][1] - p[i][1]) / area2, (p[j][0] - p[i][0]) / area2]
        });
        let area = area2.abs() / two;
        for r in 0..3 {
            let ag = [a[0][0] * grad[r][0] + a[0][1] * grad[r][1], a[1][0] * grad[r][0] + a[1][1] * grad[r][1]];
            for c in 0..3 {
                trip.push((face[c], face[r], area * (ag[0] * grad[c][0] + ag[1] * grad[c][1])));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &trip))
}

/// Map whose Beltrami coefficient relative to `from` approximates `field`, under the square boundary constraints.
pub fn reconstruct<T: Real>(
    mesh: &TriMesh<T>,
    from: &ParamMap<T>,
    field: &BeltramiField<T>,
    layout: &FreeLayout<T>,
) -> Result<ParamMap<T>> {
    let k = beltrami_stiffness(mesh, from, field)?;
    let (h, b) = layout.reduce_quadratic(&k);
    let x = match SparseCholesky::factor(&h) {
        Ok(c) => c.solve(&b),
        Err(_) => SparseLu::factor(&h)?.solve(&b),
    };
    Ok(layout.scatter(&x))
}

#[derive(Debug, Clone)]
pub struct AngleCorrection<T> {
    pub map: ParamMap<T>,
    /// Largest `|mu|` of `to` relative to `from`, before truncation.
    pub max_before: T,
    /// Largest `|mu|` of the reconstructed map relative to `from`.
    pub max_after: T,
}

/// Truncates the Beltrami coefficient of `to` relative to `from` at `delta` and reconstructs the map.
pub fn correct_angles<T: Real>(
    mesh: &TriMesh<T>,
    from: &ParamMap<T>,
    to: &ParamMap<T>,
    layout: &FreeLayout<T>,
    delta: T,
) -> Result<AngleCorrection<T>> {
    let mu = beltrami_coefficient(mesh, from, to)?;
    let map = reconstruct(mesh, from, &truncate(&mu, delta)?, layout)?;
    let max_after = beltrami_coefficient(mesh, from, &map)?.max_norm();
    Ok(AngleCorrection { map, max_before: mu.max_norm(), max_after })
}
