use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::{cross3, dot3, norm3, scale3, sub3, triangle_area3, Point3};
use crate::mesh::TriMesh;
use crate::scalar::Real;
use crate::slicer::Genus;

use super::{GeometryImage, Sampling};

/// Identified samples may differ by this fraction of the bounding-box diagonal.
pub const WELD_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum WeldStatus {
    Welded,
    /// Returned unwelded; the reason explains why.
    Open(String),
}

#[derive(Debug, Clone)]
pub struct Decoded<T> {
    pub mesh: TriMesh<T>,
    pub status: WeldStatus,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Grid vertices (`N^2` samples then `(N-1)^2` quad centers) and four triangles per quad.
pub fn grid_mesh<T: Real>(img: &GeometryImage<T>) -> (Vec<Point3<T>>, Vec<[usize; 3]>) {
    let n = img.n;
    let mut verts = img.samples.clone();
    let mut faces = Vec::with_capacity(4 * (n - 1) * (n - 1));
    let id = |i: usize, j: usize| j * n + i;
    let quarter = T::lit(0.25);
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let mut e = [T::zero(); 3];
            for v in [a, b, c, d] {
                for s in 0..3 {
                    e[s] += verts[v][s];
                }
            }
            let e_idx = verts.len();
            verts.push(scale3(e, quarter));
            faces.extend_from_slice(&[[a, b, e_idx], [b, c, e_idx], [c, d, e_idx], [d, a, e_idx]]);
        }
    }
    (verts, faces)
}

fn identified_pairs(n: usize, genus: Genus) -> Vec<(usize, usize)> {
    let id = |i: usize, j: usize| j * n + i;
    let last = n - 1;
    (0..n)
        .flat_map(|t| match genus {
            Genus::Zero => [(id(t, 0), id(0, t)), (id(last, t), id(t, last))],
            Genus::One => [(id(t, 0), id(t, last)), (id(0, t), id(last, t))],
        })
        .collect()
}

fn bbox_diagonal<T: Real>(pts: &[Point3<T>]) -> T {
    let mut lo = [T::infinity(); 3];
    let mut hi = [T::neg_infinity(); 3];
    for p in pts {
        for s in 0..3 {
            lo[s] = lo[s].min(p[s]);
            hi[s] = hi[s].max(p[s]);
        }
    }
    norm3(sub3(hi, lo))
}

/// Drops faces with repeated or collinear corners, pairs of faces on the same
/// vertex triple, and unreferenced vertices.
fn clean<T: Real>(verts: &[Point3<T>], faces: &[[usize; 3]]) -> Result<TriMesh<T>> {
    let diag = bbox_diagonal(verts);
    let min_area = T::lit(1e-12) * diag * diag;
    let mut kept: Vec<[usize; 3]> = faces
        .iter()
        .copied()
        .filter(|&[a, b, c]| a != b && b != c && a != c && triangle_area3(verts[a], verts[b], verts[c]) >= min_area)
        .collect();
    let mut count: HashMap<[usize; 3], usize> = HashMap::new();
    let key = |f: [usize; 3]| {
        let mut k = f;
        k.sort_unstable();
        k
    };
    for &f in &kept {
        *count.entry(key(f)).or_default() += 1;
    }
    kept.retain(|&f| count[&key(f)] == 1);

    let mut remap = vec![usize::MAX; verts.len()];
    let mut out_verts = Vec::new();
    for f in &mut kept {
        for v in f.iter_mut() {
            if remap[*v] == usize::MAX {
                remap[*v] = out_verts.len();
                out_verts.push(verts[*v]);
            }
            *v = remap[*v];
        }
    }
    TriMesh::new(out_verts, kept)
}

/// Reconstructs a mesh from a geometry image, welding identified sides when they agree.
pub fn decode<T: Real>(img: &GeometryImage<T>) -> Result<Decoded<T>> {
    let (verts, faces) = grid_mesh(img);
    let n = img.n;
    let open = |reason: String| -> Result<Decoded<T>> { Ok(Decoded { mesh: clean(&verts, &faces)?, status: WeldStatus::Open(reason) }) };
    if img.sampling != Sampling::LatticeCorners {
        return open("samples do not lie on the square sides".into());
    }

    let mut uf = UnionFind((0..verts.len()).collect());
    for (a, b) in identified_pairs(n, img.genus) {
        uf.union(a, b);
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..n * n {
        classes.entry(uf.find(v)).or_default().push(v);
    }
    let tol = T::lit(WELD_TOLERANCE) * bbox_diagonal(&img.samples);
    let mut welded = verts.clone();
    let mut worst = T::zero();
    for members in classes.values().filter(|m| m.len() > 1) {
        let mut avg = [T::zero(); 3];
        for &v in members {
            for s in 0..3 {
                avg[s] += verts[v][s];
            }
        }
        let avg = scale3(avg, T::one() / T::of_usize(members.len()));
        for &v in members {
            worst = worst.max(norm3(sub3(verts[v], avg)));
        }
        for &v in members {
            welded[v] = avg;
        }
    }
    if worst > tol {
        return open(format!("weld mismatch {:e} exceeds tolerance {:e}", worst.as_f64(), tol.as_f64()));
    }
    let welded_faces: Vec<[usize; 3]> = faces.iter().map(|f| f.map(|v| uf.find(v))).collect();
    match clean(&welded, &welded_faces) {
        Ok(mesh) => Ok(Decoded { mesh, status: WeldStatus::Welded }),
        Err(e) => open(format!("welded mesh invalid: {e}")),
    }
}

/// Counts of triangle corner angles in `bins` equal bins over `[0, 180]` degrees.
pub fn angle_histogram<T: Real>(mesh: &TriMesh<T>, bins: usize) -> Vec<usize> {
    let mut counts = vec![0; bins];
    if bins == 0 {
        return counts;
    }
    for f in mesh.faces() {
        let p = f.map(|v| mesh.vertex(v));
        for k in 0..3 {
            let a = sub3(p[(k + 1) % 3], p[k]);
            let b = sub3(p[(k + 2) % 3], p[k]);
            let angle = norm3(cross3(a, b)).atan2(dot3(a, b)).as_f64().to_degrees();
            let bin = ((angle / 180.0 * bins as f64) as usize).min(bins - 1);
            counts[bin] += 1;
        }
    }
    counts
}
