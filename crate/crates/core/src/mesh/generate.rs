//! Procedural test meshes.

use std::collections::HashMap;

use crate::geometry::{cross3, dot3, norm3, scale3, sub3, Point3};
use crate::mesh::TriMesh;
use crate::scalar::Real;
use crate::slicer::{BoundarySegments, Genus};

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// Orients every face of a star-shaped closed mesh so its normal points away from the origin.
fn orient_outward<T: Real>(vertices: &[Point3<T>], faces: &mut [[usize; 3]]) {
    for f in faces.iter_mut() {
        let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
        let n = cross3(sub3(b, a), sub3(c, a));
        let centroid = [a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]];
        if dot3(n, centroid) < T::zero() {
            f.swap(1, 2);
        }
    }
}

fn build<T: Real>(vertices: Vec<Point3<T>>, faces: Vec<[usize; 3]>) -> TriMesh<T> {
    TriMesh::new(vertices, faces).expect("generated mesh is valid")
}

fn icosahedron_raw<T: Real>() -> (Vec<Point3<T>>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let vertices = raw.iter().map(|p| [lit(p[0]), lit(p[1]), lit(p[2])]).collect::<Vec<_>>();
    let mut faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    orient_outward(&vertices, &mut faces);
    (vertices, faces)
}

/// Regular icosahedron inscribed in the unit sphere.
pub fn icosahedron<T: Real>() -> TriMesh<T> {
    let (v, f) = icosahedron_raw::<T>();
    let v = v.into_iter().map(|p| scale3(p, T::one() / norm3(p))).collect();
    build(v, f)
}

/// Regular icosahedron with unit edge length.
pub fn icosahedron_unit_edge<T: Real>() -> TriMesh<T> {
    let (v, f) = icosahedron_raw::<T>();
    let v = v.into_iter().map(|p| scale3(p, lit(0.5))).collect();
    build(v, f)
}

/// Loop-subdivided icosahedron projected onto the unit sphere; `20 * 4^subdiv` faces.
pub fn icosphere<T: Real>(subdiv: usize) -> TriMesh<T> {
    let (mut vertices, mut faces) = icosahedron_raw::<T>();
    for p in vertices.iter_mut() {
        *p = scale3(*p, T::one() / norm3(*p));
    }
    for _ in 0..subdiv {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point3<T>>| {
            *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                let m = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                vertices.push(scale3(m, T::one() / norm3(m)));
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    build(vertices, faces)
}

/// Icosphere scaled by `axes` along x, y and z.
pub fn ellipsoid<T: Real>(subdiv: usize, axes: [T; 3]) -> TriMesh<T> {
    let s = icosphere::<T>(subdiv);
    let v = s.vertices().iter().map(|p| [p[0] * axes[0], p[1] * axes[1], p[2] * axes[2]]).collect();
    build(v, s.faces().to_vec())
}

pub fn octahedron<T: Real>() -> TriMesh<T> {
    let (o, l) = (T::zero(), T::one());
    let vertices = vec![[l, o, o], [-l, o, o], [o, l, o], [o, -l, o], [o, o, l], [o, o, -l]];
    let mut faces = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [0, 5, 2],
        [2, 5, 1],
        [1, 5, 3],
        [3, 5, 0],
    ];
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

pub fn tetrahedron<T: Real>() -> TriMesh<T> {
    let l = T::one();
    let vertices = vec![[l, l, l], [l, -l, -l], [-l, l, -l], [-l, -l, l]];
    let mut faces = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

/// Planar grid of `nx * ny` cells over the unit square, two triangles per cell.
///
/// Vertex `(i, j)` has index `j * (nx + 1) + i` and position `(i / nx, j / ny, 0)`.
pub fn flat_grid<T: Real>(nx: usize, ny: usize) -> TriMesh<T> {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([T::of_usize(i) / T::of_usize(nx), T::of_usize(j) / T::of_usize(ny), T::zero()]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut faces = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    build(vertices, faces)
}

/// Index of torus vertex `(i, j)` in [`torus`].
pub fn torus_index(nv: usize, i: usize, j: usize) -> usize {
    i * nv + j
}

/// Structured torus with `nu` segments around the main ring and `nv` around the tube.
///
/// Vertex `(i, j)` sits at angles `u = 2 pi i / nu`, `v = 2 pi j / nv`.
pub fn torus<T: Real>(nu: usize, nv: usize, major: T, minor: T) -> TriMesh<T> {
    let tau = lit::<T>(std::f64::consts::TAU);
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = tau * T::of_usize(i) / T::of_usize(nu);
        for j in 0..nv {
            let v = tau * T::of_usize(j) / T::of_usize(nv);
            let ring = major + minor * v.cos();
            vertices.push([ring * u.cos(), ring * u.sin(), minor * v.sin()]);
        }
    }
    let id = |i: usize, j: usize| torus_index(nv, i % nu, j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    build(vertices, faces)
}

/// Square boundary segments of [`flat_grid`] already lying on the unit square.
///
/// `e` is the bottom row, `f` the right column, `g` the top row and `h` the
/// left column. Genus-zero pairing needs `nx == ny`.
pub fn flat_grid_segments(nx: usize, ny: usize, genus: Genus) -> BoundarySegments {
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    BoundarySegments {
        e: (0..=nx).map(|i| id(i, 0)).collect(),
        f: (0..=ny).map(|j| id(nx, j)).collect(),
        g: (0..=nx).map(|i| id(i, ny)).collect(),
        h: (0..=ny).map(|j| id(0, j)).collect(),
        corners: [id(0, 0), id(nx, 0), id(nx, ny), id(0, ny)],
        genus,
    }
}

/// Canonical cut loops of [`torus`]: the tube circle at `i = 0` and the ring circle at `j = 0`.
///
/// Both start at the shared vertex `(0, 0)` and list each vertex once.
pub fn torus_loops(nu: usize, nv: usize) -> (Vec<usize>, Vec<usize>) {
    let a = (0..nv).map(|j| torus_index(nv, 0, j)).collect();
    let b = (0..nu).map(|i| torus_index(nv, i, 0)).collect();
    (a, b)
}
