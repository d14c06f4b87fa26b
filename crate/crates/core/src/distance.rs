//! Point-to-surface distances through a bounding-volume hierarchy.

use rayon::prelude::*;

use crate::geometry::{closest_point_on_triangle, sub3, Point3};
use crate::mesh::TriMesh;
use crate::scalar::Real;

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Aabb<T> {
    lo: Point3<T>,
    hi: Point3<T>,
}

impl<T: Real> Aabb<T> {
    fn empty() -> Self {
        Self { lo: [T::infinity(); 3], hi: [T::neg_infinity(); 3] }
    }

    fn grow(&mut self, p: Point3<T>) {
        for s in 0..3 {
            self.lo[s] = self.lo[s].min(p[s]);
            self.hi[s] = self.hi[s].max(p[s]);
        }
    }

    fn merge(&mut self, o: &Self) {
        self.grow(o.lo);
        self.grow(o.hi);
    }

    fn distance_sq(&self, p: Point3<T>) -> T {
        let mut d = T::zero();
        for s in 0..3 {
            let e = (self.lo[s] - p[s]).max(T::zero()).max(p[s] - self.hi[s]);
            d += e * e;
        }
        d
    }
}

#[derive(Debug, Clone)]
enum Node<T> {
    Leaf { bounds: Aabb<T>, faces: Vec<usize> },
    Inner { bounds: Aabb<T>, left: usize, right: usize },
}

impl<T> Node<T> {
    fn bounds(&self) -> &Aabb<T> {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

/// Median-split hierarchy over the triangles of a mesh.
#[derive(Debug, Clone)]
pub struct Bvh<'a, T> {
    mesh: &'a TriMesh<T>,
    nodes: Vec<Node<T>>,
}

impl<'a, T: Real> Bvh<'a, T> {
    pub fn new(mesh: &'a TriMesh<T>) -> Self {
        let mut bvh = Self { mesh, nodes: Vec::new() };
        let faces: Vec<usize> = (0..mesh.n_faces()).collect();
        if !faces.is_empty() {
            bvh.build(faces);
        }
        bvh
    }

    fn face_box(&self, f: usize) -> Aabb<T> {
        let mut b = Aabb::empty();
        for v in self.mesh.face(f) {
            b.grow(self.mesh.vertex(v));
        }
        b
    }

    fn build(&mut self, mut faces: Vec<usize>) -> usize {
        let mut bounds = Aabb::empty();
        for &f in &faces {
            bounds.merge(&self.face_box(f));
        }
        if faces.len() <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { bounds, faces });
            return self.nodes.len() - 1;
        }
        let ext = sub3(bounds.hi, bounds.lo);
        let axis = (0..3).fold(0, |a, s| if ext[s] > ext[a] { s } else { a });
        let centroid = |f: usize| -> T {
            self.mesh.face(f).iter().map(|&v| self.mesh.vertex(v)[axis]).sum::<T>()
        };
        faces.sort_by(|&a, &b| centroid(a).partial_cmp(&centroid(b)).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        let right_faces = faces.split_off(faces.len() / 2);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { bounds, faces: Vec::new() });
        let left = self.build(faces);
        let right = self.build(right_faces);
        self.nodes[slot] = Node::Inner { bounds, left, right };
        slot
    }

    /// Distance from `p` to the surface and the nearest face.
    pub fn closest(&self, p: Point3<T>) -> Option<(T, usize)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (T::infinity(), usize::MAX);
        let mut stack = vec![0];
        while let Some(k) = stack.pop() {
            let node = &self.nodes[k];
            if node.bounds().distance_sq(p) >= best.0 {
                continue;
            }
            match node {
                Node::Leaf { faces, .. } => {
                    for &f in faces {
                        let [a, b, c] = self.mesh.face(f).map(|v| self.mesh.vertex(v));
                        let q = closest_point_on_triangle(p, a, b, c);
                        let d = sub3(q, p);
                        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                        if d2 < best.0 {
                            best = (d2, f);
                        }
                    }
                }
                Node::Inner { left, right, .. } => {
                    let (dl, dr) = (self.nodes[*left].bounds().distance_sq(p), self.nodes[*right].bounds().distance_sq(p));
                    // Visit the nearer child first.
                    if dl < dr {
                        stack.extend([*right, *left]);
                    } else {
                        stack.extend([*left, *right]);
                    }
                }
            }
        }
        Some((best.0.sqrt(), best.1))
    }
}

/// Vertices and face centroids of `mesh`, used as surface samples.
pub fn surface_samples<T: Real>(mesh: &TriMesh<T>) -> Vec<Point3<T>> {
    let third = T::one() / T::lit(3.0);
    let mut pts = mesh.vertices().to_vec();
    pts.extend((0..mesh.n_faces()).map(|f| {
        let [a, b, c] = mesh.face(f).map(|v| mesh.vertex(v));
        [0, 1, 2].map(|s| (a[s] + b[s] + c[s]) * third)
    }));
    pts
}

/// Mean and maximum distance from the samples of `from` to the surface `to`.
pub fn directed_distance<T: Real>(from: &TriMesh<T>, to: &TriMesh<T>) -> (T, T) {
    let bvh = Bvh::new(to);
    let pts = surface_samples(from);
    let d: Vec<T> = pts.par_iter().map(|&p| bvh.closest(p).map_or(T::infinity(), |r| r.0)).collect();
    let mean = d.iter().copied().sum::<T>() / T::of_usize(d.len().max(1));
    (mean, d.into_iter().fold(T::zero(), T::max))
}

/// Larger of the two directed mean distances.
pub fn symmetric_mean_distance<T: Real>(a: &TriMesh<T>, b: &TriMesh<T>) -> T {
    directed_distance(a, b).0.max(directed_distance(b, a).0)
}

pub fn hausdorff_distance<T: Real>(a: &TriMesh<T>, b: &TriMesh<T>) -> T {
    directed_distance(a, b).1.max(directed_distance(b, a).1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::norm3;
    use crate::mesh::generate;

    #[test]
    fn matches_brute_force() {
        let mesh = generate::icosphere::<f64>(2);
        let bvh = Bvh::new(&mesh);
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let p = [1.3 * t.cos(), 0.7 * t.sin(), (t * 0.5).sin() * 0.9];
            let brute = (0..mesh.n_faces())
                .map(|f| {
                    let [a, b, c] = mesh.face(f).map(|v| mesh.vertex(v));
                    norm3(sub3(closest_point_on_triangle(p, a, b, c), p))
                })
                .fold(f64::INFINITY, f64::min);
            assert!((bvh.closest(p).unwrap().0 - brute).abs() < 1e-14);
        }
    }

    #[test]
    fn identical_meshes_have_zero_distance() {
        let mesh = generate::icosphere::<f64>(1);
        assert!(symmetric_mean_distance(&mesh, &mesh) < 1e-15);
    }
}
