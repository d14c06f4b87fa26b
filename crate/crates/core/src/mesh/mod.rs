//! Indexed triangle meshes, topology queries and OBJ I/O.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{norm3, sub3, triangle_area3, Point3};
use crate::scalar::Real;

pub mod generate;
pub mod obj;

pub use obj::{load_mesh, read_obj, write_obj, ObjData};

/// An oriented, edge-manifold triangle mesh.
///
/// Faces are stored counterclockwise. Construction validates indices, rejects
/// exactly-degenerate faces and non-manifold edges, and repairs inconsistent
/// orientation by flipping faces where possible. The mesh is immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct TriMesh<T> {
    vertices: Vec<Point3<T>>,
    faces: Vec<[usize; 3]>,
    vertex_faces: Vec<Vec<usize>>,
    halfedges: HashMap<(usize, usize), usize>,
    n_edges: usize,
    flipped: usize,
}

/// Cyclic list of boundary vertices, ordered so the surface lies to the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLoop(pub Vec<usize>);

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// True when no vertex repeats.
    pub fn is_simple(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

impl<T: Real> TriMesh<T> {
    pub fn new(vertices: Vec<Point3<T>>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(Error::IndexOutOfRange { face: fi, vertex: v });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::DegenerateFace { face: fi });
            }
        }
        let diag = bbox_diagonal(&vertices);
        let threshold = T::lit(1e-12) * diag * diag;
        for (fi, f) in faces.iter().enumerate() {
            let area = triangle_area3(vertices[f[0]], vertices[f[1]], vertices[f[2]]);
            if !(area >= threshold) || area == T::zero() {
                return Err(Error::DegenerateFace { face: fi });
            }
        }
        let mut seen: HashMap<[usize; 3], usize> = HashMap::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let mut key = *f;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateFace { face: fi, first });
            }
            seen.insert(key, fi);
        }
        let mut referenced = vec![false; n];
        for f in &faces {
            for &v in f {
                referenced[v] = true;
            }
        }
        if let Some(vertex) = referenced.iter().position(|&r| !r) {
            return Err(Error::UnreferencedVertex { vertex });
        }

        let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let entry = edge_faces.entry((a.min(b), a.max(b))).or_default();
                entry.push(fi);
                if entry.len() > 2 {
                    return Err(Error::NonManifoldEdge { a: a.min(b), b: a.max(b) });
                }
            }
        }
        let n_edges = edge_faces.len();

        let (faces, flipped) = orient_faces(faces, &edge_faces)?;

        let mut halfedges = HashMap::with_capacity(faces.len() * 3);
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if halfedges.insert((a, b), fi).is_some() {
                    return Err(Error::Orientation { face: fi });
                }
            }
        }
        let mut vertex_faces = vec![Vec::new(); n];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                vertex_faces[v].push(fi);
            }
        }
        Ok(Self { vertices, faces, vertex_faces, halfedges, n_edges, flipped })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn vertices(&self) -> &[Point3<T>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex(&self, v: usize) -> Point3<T> {
        self.vertices[v]
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    /// Faces incident to `v`, in ascending order.
    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    /// Number of faces whose orientation was flipped during construction.
    pub fn flipped_faces(&self) -> usize {
        self.flipped
    }

    /// Face containing the directed edge `a -> b`, if any.
    pub fn halfedge_face(&self, a: usize, b: usize) -> Option<usize> {
        self.halfedges.get(&(a, b)).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.halfedges.contains_key(&(a, b)) || self.halfedges.contains_key(&(b, a))
    }

    /// Sorted list of vertices adjacent to `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertex_faces[v]
            .iter()
            .flat_map(|&f| self.faces[f])
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| (0..3).map(move |k| (f[k], f[(k + 1) % 3])))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Half the norm of the cross product of two edge vectors.
    pub fn face_area(&self, f: usize) -> T {
        let [a, b, c] = self.faces[f];
        triangle_area3(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn face_areas(&self) -> Vec<T> {
        (0..self.n_faces()).map(|f| self.face_area(f)).collect()
    }

    pub fn total_area(&self) -> T {
        (0..self.n_faces()).map(|f| self.face_area(f)).sum()
    }

    pub fn bbox_diagonal(&self) -> T {
        bbox_diagonal(&self.vertices)
    }

    /// Returns a uniformly scaled copy with unit total area, and the scale factor applied.
    pub fn normalize_to_unit_area(&self) -> Result<(Self, T)> {
        let area = self.total_area();
        if !(area > T::zero()) {
            return Err(Error::ZeroArea);
        }
        let s = T::one() / area.sqrt();
        Ok((self.scaled(s), s))
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        for p in &mut out.vertices {
            for c in p.iter_mut() {
                *c *= s;
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges as i64 + self.n_faces() as i64
    }

    /// True when every edge borders exactly two faces.
    pub fn is_closed(&self) -> bool {
        self.halfedges.keys().all(|&(a, b)| self.halfedges.contains_key(&(b, a)))
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_faces[v].iter().any(|&f| {
            let face = self.faces[f];
            (0..3).any(|k| {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                (a == v || b == v) && !self.halfedges.contains_key(&(b, a))
            })
        })
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_vertices()];
        for &(a, b) in self.halfedges.keys() {
            if !self.halfedges.contains_key(&(b, a)) {
                mask[a] = true;
                mask[b] = true;
            }
        }
        mask
    }

    /// Genus from the Euler characteristic of a closed mesh.
    pub fn genus_of_closed(&self) -> Result<usize> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi > 2 {
            return Err(Error::OddEulerCharacteristic { chi });
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Boundary loops, each oriented with the surface on its left. Empty for closed meshes.
    pub fn boundary_loops(&self) -> Vec<BoundaryLoop> {
        let mut outgoing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if !self.halfedges.contains_key(&(b, a)) {
                    outgoing.entry(a).or_default().push(b);
                }
            }
        }
        for targets in outgoing.values_mut() {
            targets.sort_unstable();
        }
        let mut loops = Vec::new();
        while let Some((&start, _)) = outgoing.iter().find(|(_, t)| !t.is_empty()) {
            let mut lp = vec![start];
            let mut cur = start;
            loop {
                let targets = outgoing.get_mut(&cur).expect("boundary vertex has outgoing edge");
                let next = targets.remove(0);
                if next == start {
                    break;
                }
                lp.push(next);
                cur = next;
                if outgoing.get(&cur).map_or(true, |t| t.is_empty()) {
                    break;
                }
            }
            loops.push(BoundaryLoop(lp));
        }
        loops
    }
}

fn bbox_diagonal<T: Real>(vertices: &[Point3<T>]) -> T {
    if vertices.is_empty() {
        return T::zero();
    }
    let mut lo = vertices[0];
    let mut hi = vertices[0];
    for p in vertices {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    norm3(sub3(hi, lo))
}

/// Breadth-first flip propagation so that every shared edge is traversed once per direction.
fn orient_faces(
    mut faces: Vec<[usize; 3]>,
    edge_faces: &HashMap<(usize, usize), Vec<usize>>,
) -> Result<(Vec<[usize; 3]>, usize)> {
    let contains = |f: &[usize; 3], a: usize, b: usize| {
        (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b)
    };
    let consistent = edge_faces.values().all(|fs| {
        if fs.len() < 2 {
            return true;
        }
        let (f, g) = (&faces[fs[0]], &faces[fs[1]]);
        (0..3).all(|k| !contains(g, f[k], f[(k + 1) % 3]))
    });
    if consistent {
        return Ok((faces, 0));
    }

    let original = faces.clone();
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    let mut queue = VecDeque::new();
    for seed in 0..faces.len() {
        if flip[seed].is_some() {
            continue;
        }
        flip[seed] = Some(false);
        queue.push_back(seed);
        while let Some(f) = queue.pop_front() {
            let mut eff = original[f];
            if flip[f] == Some(true) {
                eff.swap(1, 2);
            }
            for k in 0..3 {
                let (a, b) = (eff[k], eff[(k + 1) % 3]);
                for &g in &edge_faces[&(a.min(b), a.max(b))] {
                    if g == f {
                        continue;
                    }
                    let want = contains(&original[g], a, b);
                    match flip[g] {
                        None => {
                            flip[g] = Some(want);
                            queue.push_back(g);
                        }
                        Some(existing) if existing != want => {
                            return Err(Error::Orientation { face: g });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let mut flipped = 0;
    for (f, face) in faces.iter_mut().enumerate() {
        if flip[f] == Some(true) {
            face.swap(1, 2);
            flipped += 1;
        }
    }
    Ok((faces, flipped))
}
