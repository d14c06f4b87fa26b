use rayon::prelude::*;

use crate::bijectivity::count_folded;
use crate::error::{Error, Result};
use crate::geometry::{barycentric2, closest_point_on_triangle, norm3, sub3, Point2};
use crate::mesh::TriMesh;
use crate::param::ParamMap;
use crate::scalar::Real;
use crate::slicer::Genus;

use super::{GeometryImage, Sampling};

const SLACK: f64 = 1e-12;

/// Uniform-grid index of image triangles over the unit square.
#[derive(Debug, Clone)]
pub struct PointLocator<'a, T> {
    mesh: &'a TriMesh<T>,
    map: &'a ParamMap<T>,
    cells: usize,
    bins: Vec<Vec<usize>>,
}

impl<'a, T: Real> PointLocator<'a, T> {
    pub fn new(mesh: &'a TriMesh<T>, map: &'a ParamMap<T>) -> Self {
        let cells = ((mesh.n_faces() as f64).sqrt().ceil() as usize).max(1);
        let mut bins = vec![Vec::new(); cells * cells];
        let slack = T::lit(SLACK);
        let cell_of = |x: T| -> usize {
            let c = (x * T::of_usize(cells)).floor().to_isize().unwrap_or(0);
            c.clamp(0, cells as isize - 1) as usize
        };
        for f in 0..mesh.n_faces() {
            let p = mesh.face(f).map(|v| map.point(v));
            let lo = [0, 1].map(|s| p.iter().map(|q| q[s]).fold(T::infinity(), T::min) - slack);
            let hi = [0, 1].map(|s| p.iter().map(|q| q[s]).fold(T::neg_infinity(), T::max) + slack);
            for cy in cell_of(lo[1])..=cell_of(hi[1]) {
                for cx in cell_of(lo[0])..=cell_of(hi[0]) {
                    bins[cy * cells + cx].push(f);
                }
            }
        }
        Self { mesh, map, cells, bins }
    }

    /// Face containing `p` within the slack and its barycentric coordinates.
    ///
    /// Among several candidates the one with the largest minimum coordinate wins.
    pub fn locate(&self, p: Point2<T>) -> Option<(usize, [T; 3])> {
        let n = self.cells;
        let cell = |x: T| ((x * T::of_usize(n)).floor().to_isize().unwrap_or(0)).clamp(0, n as isize - 1) as usize;
        let slack = T::lit(-SLACK);
        let mut best: Option<(usize, [T; 3], T)> = None;
        for &f in &self.bins[cell(p[1]) * n + cell(p[0])] {
            let [a, b, c] = self.mesh.face(f).map(|v| self.map.point(v));
            let Some(l) = barycentric2(p, a, b, c) else { continue };
            let worst = l[0].min(l[1]).min(l[2]);
            if worst >= slack && best.map_or(true, |(_, _, w)| worst > w) {
                best = Some((f, l, worst));
            }
        }
        best.map(|(f, l, _)| (f, l))
    }

    /// Face nearest to `p` in the plane and the barycentric coordinates of the closest point.
    pub fn nearest(&self, p: Point2<T>) -> (usize, [T; 3]) {
        let z = T::zero();
        let q = [p[0], p[1], z];
        let mut best = (0, [T::one(), z, z], T::infinity());
        for f in 0..self.mesh.n_faces() {
            let [a, b, c] = self.mesh.face(f).map(|v| {
                let x = self.map.point(v);
                [x[0], x[1], z]
            });
            let cp = closest_point_on_triangle(q, a, b, c);
            let d = norm3(sub3(cp, q));
            if d < best.2 {
                let l = barycentric2([cp[0], cp[1]], [a[0], a[1]], [b[0], b[1]], [c[0], c[1]]).unwrap_or([T::one(), z, z]);
                let l = l.map(|x| x.max(z));
                let s = l[0] + l[1] + l[2];
                best = (f, l.map(|x| x / s), d);
            }
        }
        (best.0, best.1)
    }
}

/// Samples the surface positions of `mesh` on an `n x n` grid through the fold-free map `map`.
pub fn encode<T: Real>(
    mesh: &TriMesh<T>,
    map: &ParamMap<T>,
    n: usize,
    genus: Genus,
    sampling: Sampling,
) -> Result<GeometryImage<T>> {
    if n < 2 {
        return Err(Error::Image(format!("resolution {n} is below 2")));
    }
    if map.len() != mesh.n_vertices() {
        return Err(Error::Image("map and mesh sizes differ".into()));
    }
    let folds = count_folded(mesh, map).count;
    if folds > 0 {
        return Err(Error::Image(format!("map has {folds} folded faces")));
    }
    let locator = PointLocator::new(mesh, map);
    let (zero, one) = (T::zero(), T::one());
    let results: Vec<_> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let p = [sampling.coordinate::<T>(i, n).max(zero).min(one), sampling.coordinate::<T>(j, n).max(zero).min(one)];
            let (face, l, fallback) = match locator.locate(p) {
                Some((f, l)) => (f, l, false),
                None => {
                    let (f, l) = locator.nearest(p);
                    (f, l, true)
                }
            };
            let [a, b, c] = mesh.face(face).map(|v| mesh.vertex(v));
            let pos = [0, 1, 2].map(|s| l[0] * a[s] + l[1] * b[s] + l[2] * c[s]);
            (pos, fallback)
        })
        .collect();
    let fallback_pixels = results.iter().filter(|r| r.1).count();
    Ok(GeometryImage { n, samples: results.into_iter().map(|r| r.0).collect(), genus, sampling, fallback_pixels })
}
