#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use squaremap::mesh::{generate, TriMesh};
use squaremap::param::{FreeLayout, ParamMap};
use squaremap::slicer::{slice_genus_one, slice_genus_zero, CutPath, SlicedMesh};

pub fn sliced_icosphere(subdiv: usize) -> SlicedMesh<f64> {
    let (mesh, _) = generate::icosphere::<f64>(subdiv).normalize_to_unit_area().unwrap();
    slice_genus_zero(&mesh).unwrap()
}

pub fn sliced_torus(nu: usize, nv: usize) -> SlicedMesh<f64> {
    let (mesh, _) = generate::torus::<f64>(nu, nv, 1.0, 0.4).normalize_to_unit_area().unwrap();
    let (a, b) = generate::torus_loops(nu, nv);
    slice_genus_one(&mesh, &CutPath::closed(a), &CutPath::closed(b)).unwrap()
}

pub fn layout_of(s: &SlicedMesh<f64>) -> FreeLayout<f64> {
    FreeLayout::new(s.mesh.n_vertices(), s.segments().unwrap()).unwrap()
}

/// Feasible map with uniform random interior and sorted random side positions.
pub fn random_map(layout: &FreeLayout<f64>, rng: &mut ChaCha8Rng) -> ParamMap<f64> {
    let mut x = vec![0.0; layout.n_free()];
    let [iu, iv, e, f] = layout.blocks();
    for k in iu.chain(iv) {
        x[k] = rng.gen_range(0.02..0.98);
    }
    for r in [e, f] {
        let mut vals: Vec<f64> = r.clone().map(|_| rng.gen_range(0.01..0.99)).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, v) in r.zip(vals) {
            x[k] = v;
        }
    }
    layout.scatter(&x)
}

pub fn identity_map(mesh: &TriMesh<f64>) -> ParamMap<f64> {
    ParamMap { u: mesh.vertices().iter().map(|p| p[0]).collect(), v: mesh.vertices().iter().map(|p| p[1]).collect() }
}

/// Closed surface of the box `[0,a] x [0,b] x [0,c]` triangulated on the integer lattice.
pub fn lattice_box(a: usize, b: usize, c: usize) -> TriMesh<f64> {
    use std::collections::HashMap;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    let mut id = |p: [i64; 3], verts: &mut Vec<[f64; 3]>| -> usize {
        *index.entry(p).or_insert_with(|| {
            verts.push([p[0] as f64, p[1] as f64, p[2] as f64]);
            verts.len() - 1
        })
    };
    let dims = [a as i64, b as i64, c as i64];
    for axis in 0..3 {
        let (s, t) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in [0, dims[axis]] {
            for i in 0..dims[s] {
                for j in 0..dims[t] {
                    let corner = |di: i64, dj: i64| {
                        let mut p = [0; 3];
                        p[axis] = side;
                        p[s] = i + di;
                        p[t] = j + dj;
                        p
                    };
                    let q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)].map(|p| id(p, &mut verts));
                    if side == 0 {
                        faces.push([q[0], q[2], q[1]]);
                        faces.push([q[0], q[3], q[2]]);
                    } else {
                        faces.push([q[0], q[1], q[2]]);
                        faces.push([q[0], q[2], q[3]]);
                    }
                }
            }
        }
    }
    TriMesh::new(verts, faces).unwrap()
}
