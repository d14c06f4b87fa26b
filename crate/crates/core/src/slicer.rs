//! Cutting closed genus-zero and genus-one meshes into topological disks.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{norm3, sub3, symmetric_eigen3};
use crate::mesh::TriMesh;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Genus {
    Zero,
    One,
}

impl Genus {
    pub fn from_index(g: usize) -> Option<Self> {
        match g {
            0 => Some(Genus::Zero),
            1 => Some(Genus::One),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Genus::Zero => 0,
            Genus::One => 1,
        }
    }
}

/// Ordered vertex path; a closed path implicitly returns from the last vertex to the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPath {
    pub vertices: Vec<usize>,
    pub closed: bool,
}

impl CutPath {
    pub fn open(vertices: Vec<usize>) -> Self {
        Self { vertices, closed: false }
    }

    /// A closed loop; a trailing copy of the first vertex is dropped.
    pub fn closed(mut vertices: Vec<usize>) -> Self {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        Self { vertices, closed: true }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges, including the closing edge of a loop.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = &self.vertices;
        let mut out: Vec<(usize, usize)> = v.windows(2).map(|w| (w[0], w[1])).collect();
        if self.closed && v.len() > 2 {
            out.push((v[v.len() - 1], v[0]));
        }
        out
    }

    /// Euclidean length along the mesh vertices.
    pub fn arc_length<T: Real>(&self, mesh: &TriMesh<T>) -> T {
        self.edges().iter().map(|&(a, b)| norm3(sub3(mesh.vertex(a), mesh.vertex(b)))).sum()
    }

    pub fn validate<T: Real>(&self, mesh: &TriMesh<T>) -> Result<()> {
        let min = if self.closed { 3 } else { 2 };
        if self.vertices.len() < min {
            return Err(Error::InvalidPath(format!("path needs at least {min} vertices")));
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= mesh.n_vertices()) {
            return Err(Error::InvalidPath(format!("vertex {v} out of range")));
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("path crosses itself".into()));
        }
        for (a, b) in self.edges() {
            if !mesh.has_edge(a, b) {
                return Err(Error::InvalidPath(format!("({a}, {b}) is not a mesh edge")));
            }
        }
        Ok(())
    }
}

/// The four boundary arcs of a sliced disk and their corner vertices.
///
/// `corners` holds `[B_i, B_j, B_k, B_l]`, mapped to `(0,0)`, `(1,0)`, `(1,1)`
/// and `(0,1)`. `e` runs `B_i..B_j`, `f` runs `B_j..B_k`, `g` runs `B_l..B_k`
/// and `h` runs `B_i..B_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySegments {
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
    pub corners: [usize; 4],
    pub genus: Genus,
}

impl BoundarySegments {
    /// Boundary vertices in loop order starting at `B_i`, each listed once.
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.e[..self.e.len() - 1]);
        out.extend_from_slice(&self.f[..self.f.len() - 1]);
        out.extend(self.g.iter().rev().take(self.g.len() - 1));
        out.extend(self.h.iter().rev().take(self.h.len() - 1));
        out
    }
}

/// A disk-topology mesh cut from a closed surface.
#[derive(Debug, Clone)]
pub struct SlicedMesh<T> {
    pub mesh: TriMesh<T>,
    /// Original vertex index for every vertex of `mesh`; identity on non-duplicated vertices.
    pub origin_of: Vec<usize>,
    pub segments: Option<BoundarySegments>,
    /// Cut paths in original vertex indices.
    pub cut_paths: Vec<CutPath>,
}

impl<T: Real> SlicedMesh<T> {
    pub fn segments(&self) -> Result<&BoundarySegments> {
        self.segments.as_ref().ok_or_else(|| Error::Segments("segments not assigned".into()))
    }

    /// Vertices of the sliced mesh whose origin is `v`, ascending.
    pub fn copies_of(&self, v: usize) -> Vec<usize> {
        (0..self.origin_of.len()).filter(|&i| self.origin_of[i] == v).collect()
    }
}

/// Argmin and argmax of the vertex coordinates projected on the first right singular vector.
///
/// The vertex matrix is used as given, without centering. The singular vector's sign
/// is fixed so its largest-magnitude component is positive; ties go to the lowest index.
pub fn principal_axis_extremes<T: Real>(mesh: &TriMesh<T>) -> (usize, usize) {
    let mut gram = [[T::zero(); 3]; 3];
    for p in mesh.vertices() {
        for r in 0..3 {
            for c in 0..3 {
                gram[r][c] += p[r] * p[c];
            }
        }
    }
    let (_, vecs) = symmetric_eigen3(gram);
    let mut axis = [vecs[0][0], vecs[1][0], vecs[2][0]];
    let big = (0..3).fold(0, |b, k| if axis[k].abs() > axis[b].abs() { k } else { b });
    if axis[big] < T::zero() {
        axis = [-axis[0], -axis[1], -axis[2]];
    }
    let proj = |v: usize| {
        let p = mesh.vertex(v);
        p[0] * axis[0] + p[1] * axis[1] + p[2] * axis[2]
    };
    let (mut lo, mut hi) = (0, 0);
    for v in 1..mesh.n_vertices() {
        if proj(v) < proj(lo) {
            lo = v;
        }
        if proj(v) > proj(hi) {
            hi = v;
        }
    }
    (lo, hi)
}

#[derive(Clone, Copy, PartialEq)]
struct Entry<T> {
    dist: T,
    vertex: usize,
}

impl<T: Real> Eq for Entry<T> {}

impl<T: Real> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl<T: Real> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source Dijkstra over mesh edges with Euclidean lengths.
///
/// Returns distances and predecessors; on equal cost the smaller predecessor wins.
pub fn dijkstra<T: Real>(mesh: &TriMesh<T>, source: usize) -> (Vec<T>, Vec<usize>) {
    let n = mesh.n_vertices();
    let adjacency: Vec<Vec<usize>> = (0..n).map(|v| mesh.neighbors(v)).collect();
    let mut dist = vec![T::infinity(); n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = T::zero();
    heap.push(Entry { dist: T::zero(), vertex: source });
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &w in &adjacency[u] {
            if done[w] {
                continue;
            }
            let nd = d + norm3(sub3(mesh.vertex(u), mesh.vertex(w)));
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = u;
                heap.push(Entry { dist: nd, vertex: w });
            } else if nd == dist[w] && u < pred[w] {
                pred[w] = u;
            }
        }
    }
    (dist, pred)
}

pub fn shortest_path<T: Real>(mesh: &TriMesh<T>, a: usize, b: usize) -> Result<CutPath> {
    if a == b {
        return Err(Error::InvalidPath("endpoints coincide".into()));
    }
    let (dist, pred) = dijkstra(mesh, a);
    if !dist[b].is_finite() {
        return Err(Error::Disconnected { from: a, to: b });
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Ok(CutPath::open(path))
}

/// Result of one cut before segments are assigned.
struct Cut<T> {
    mesh: TriMesh<T>,
    /// Index in the input mesh for every output vertex.
    origin: Vec<usize>,
    /// Duplicate created for each duplicated input vertex.
    duplicate: HashMap<usize, usize>,
}

fn cut<T: Real>(mesh: &TriMesh<T>, path: &CutPath) -> Result<Cut<T>> {
    path.validate(mesh)?;
    let n = mesh.n_vertices();
    let boundary = mesh.boundary_mask();
    let k = path.len();
    let verts = &path.vertices;

    let mut on_path = vec![false; n];
    for &v in verts {
        on_path[v] = true;
    }
    let mut duplicated = vec![false; n];
    if path.closed {
        if let Some(&v) = verts.iter().find(|&&v| boundary[v]) {
            return Err(Error::InvalidPath(format!("loop vertex {v} lies on the boundary")));
        }
        for &v in verts {
            duplicated[v] = true;
        }
    } else {
        for &v in &verts[1..k - 1] {
            if boundary[v] {
                return Err(Error::InvalidPath(format!("interior path vertex {v} lies on the boundary")));
            }
            duplicated[v] = true;
        }
        for &v in [verts[0], verts[k - 1]].iter() {
            if boundary[v] {
                duplicated[v] = true;
            }
        }
    }
    if !duplicated.iter().any(|&d| d) {
        return Err(Error::InvalidPath(
            "a single-edge slit between interior vertices cannot be opened in an indexed mesh".into(),
        ));
    }

    const UNSET: u8 = 0;
    const LEFT: u8 = 1;
    const RIGHT: u8 = 2;
    let m = mesh.n_faces();
    let mut side = vec![UNSET; m];
    for (a, b) in path.edges() {
        let (Some(l), Some(r)) = (mesh.halfedge_face(a, b), mesh.halfedge_face(b, a)) else {
            return Err(Error::InvalidPath(format!("path edge ({a}, {b}) lies on the boundary")));
        };
        for (f, s) in [(l, LEFT), (r, RIGHT)] {
            if side[f] != UNSET && side[f] != s {
                return Err(Error::SliceInconsistent(format!("face {f} lies on both sides of the path")));
            }
            side[f] = s;
        }
    }
    let mut pending: Vec<usize> = (0..m)
        .filter(|&f| side[f] == UNSET && mesh.face(f).iter().any(|&v| duplicated[v]))
        .collect();

    let side_vertices = |side: &[u8], which: u8| {
        let mut mark = vec![false; n];
        for f in 0..m {
            if side[f] == which {
                for v in mesh.face(f) {
                    if !on_path[v] {
                        mark[v] = true;
                    }
                }
            }
        }
        mark
    };
    while !pending.is_empty() {
        let before = pending.len();
        for which in [LEFT, RIGHT] {
            let reach = side_vertices(&side, which);
            let (hit, rest): (Vec<usize>, Vec<usize>) =
                pending.iter().partition(|&&f| mesh.face(f).iter().any(|&v| reach[v]));
            for f in hit {
                side[f] = which;
            }
            pending = rest;
        }
        if pending.len() == before {
            return Err(Error::PropagationStalled { unassigned: pending.len() });
        }
    }

    let mut referenced = vec![false; n];
    for f in 0..m {
        if side[f] == RIGHT {
            for v in mesh.face(f) {
                if duplicated[v] {
                    referenced[v] = true;
                }
            }
        }
    }
    let mut vertices = mesh.vertices().to_vec();
    let mut origin: Vec<usize> = (0..n).collect();
    let mut duplicate = HashMap::new();
    for &v in verts {
        if referenced[v] {
            duplicate.insert(v, vertices.len());
            vertices.push(mesh.vertex(v));
            origin.push(v);
        }
    }
    let faces: Vec<[usize; 3]> = (0..m)
        .map(|f| {
            let face = mesh.face(f);
            if side[f] == RIGHT {
                face.map(|v| if duplicated[v] { duplicate[&v] } else { v })
            } else {
                face
            }
        })
        .collect();
    let out = TriMesh::new(vertices, faces)?;

    let expected_chi = mesh.euler_characteristic() + duplicate.len() as i64 - path.edges().len() as i64;
    if out.euler_characteristic() != expected_chi {
        return Err(Error::SliceInconsistent(format!(
            "Euler characteristic {} after cut, expected {expected_chi}",
            out.euler_characteristic()
        )));
    }
    let loops = out.boundary_loops();
    if loops.iter().any(|l| !l.is_simple()) {
        return Err(Error::SliceInconsistent("boundary loop is not simple".into()));
    }
    let before_loops = mesh.boundary_loops();
    let expected_loops = if before_loops.is_empty() {
        Some(if path.closed { 1 } else { 0 } + 1)
    } else if !path.closed && boundary[verts[0]] && boundary[verts[k - 1]] {
        let which = |v: usize| before_loops.iter().position(|l| l.0.contains(&v));
        if which(verts[0]) == which(verts[k - 1]) {
            Some(before_loops.len() + 1)
        } else {
            Some(before_loops.len() - 1)
        }
    } else {
        None
    };
    if let Some(e) = expected_loops {
        if loops.len() != e {
            return Err(Error::SliceInconsistent(format!("{} boundary loops after cut, expected {e}", loops.len())));
        }
    }
    Ok(Cut { mesh: out, origin, duplicate })
}

/// Cuts along an open path (slit) or closed loop. Segments are left unassigned.
pub fn slice_along_path<T: Real>(mesh: &TriMesh<T>, path: &CutPath) -> Result<SlicedMesh<T>> {
    let c = cut(mesh, path)?;
    Ok(SlicedMesh { mesh: c.mesh, origin_of: c.origin, segments: None, cut_paths: vec![path.clone()] })
}

/// Slices a genus-zero mesh along the shortest path between its principal-axis extremes.
pub fn slice_genus_zero<T: Real>(mesh: &TriMesh<T>) -> Result<SlicedMesh<T>> {
    let (a, b) = principal_axis_extremes(mesh);
    let path = shortest_path(mesh, a, b)?;
    slice_genus_zero_along(mesh, &path)
}

pub fn slice_genus_zero_along<T: Real>(mesh: &TriMesh<T>, path: &CutPath) -> Result<SlicedMesh<T>> {
    if path.closed {
        return Err(Error::InvalidPath("genus-zero cut must be an open path".into()));
    }
    let mut s = slice_along_path(mesh, path)?;
    check_disk(&s.mesh)?;
    s.segments = Some(assign_corners_and_segments(&s, Genus::Zero)?);
    Ok(s)
}

fn check_disk<T: Real>(mesh: &TriMesh<T>) -> Result<()> {
    let loops = mesh.boundary_loops().len();
    if mesh.euler_characteristic() != 1 || loops != 1 {
        return Err(Error::SliceInconsistent(format!(
            "expected a disk, found chi = {} with {loops} boundary loops",
            mesh.euler_characteristic()
        )));
    }
    Ok(())
}

fn rotate_to(v: &[usize], start: usize) -> Vec<usize> {
    let p = v.iter().position(|&x| x == start).expect("start on loop");
    v[p..].iter().chain(&v[..p]).copied().collect()
}

/// Cuts a genus-one mesh along two loops that meet in exactly one base vertex.
pub fn slice_genus_one<T: Real>(mesh: &TriMesh<T>, loop_a: &CutPath, loop_b: &CutPath) -> Result<SlicedMesh<T>> {
    if !loop_a.closed || !loop_b.closed {
        return Err(Error::LoopPrecondition("both cut loops must be closed".into()));
    }
    loop_a.validate(mesh)?;
    loop_b.validate(mesh)?;
    let shared: Vec<usize> = loop_a.vertices.iter().copied().filter(|v| loop_b.vertices.contains(v)).collect();
    if shared.len() != 1 {
        return Err(Error::LoopPrecondition(format!("loops share {} vertices, expected exactly one", shared.len())));
    }
    let base = shared[0];
    let a = CutPath::closed(rotate_to(&loop_a.vertices, base));
    let b = CutPath::closed(rotate_to(&loop_b.vertices, base));

    let first = cut(mesh, &a)?;
    let copies = [base, *first.duplicate.get(&base).ok_or_else(|| {
        Error::LoopPrecondition("base vertex was not duplicated by the first cut".into())
    })?];
    let (b1, bl) = (b.vertices[1], b.vertices[b.len() - 1]);
    let adjacent = |v: usize| -> Result<usize> {
        let hits: Vec<usize> = copies.iter().copied().filter(|&c| first.mesh.has_edge(c, v)).collect();
        match hits.as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::LoopPrecondition(format!("loop b is not realizable after the first cut near vertex {v}"))),
        }
    };
    let (start, end) = (adjacent(b1)?, adjacent(bl)?);
    if start == end {
        return Err(Error::LoopPrecondition("loop b returns to the same side of loop a".into()));
    }
    let mut open = vec![start];
    open.extend_from_slice(&b.vertices[1..]);
    open.push(end);
    let second = cut(&first.mesh, &CutPath::open(open))?;
    let origin_of: Vec<usize> = second.origin.iter().map(|&v| first.origin[v]).collect();
    let mut s = SlicedMesh { mesh: second.mesh, origin_of, segments: None, cut_paths: vec![a, b] };
    check_disk(&s.mesh)?;
    s.segments = Some(assign_corners_and_segments(&s, Genus::One)?);
    Ok(s)
}

/// Partitions the single boundary loop into the four square sides.
pub fn assign_corners_and_segments<T: Real>(s: &SlicedMesh<T>, genus: Genus) -> Result<BoundarySegments> {
    let loops = s.mesh.boundary_loops();
    if loops.len() != 1 {
        return Err(Error::Segments(format!("expected one boundary loop, found {}", loops.len())));
    }
    let lp = &loops[0].0;
    let origin = |v: usize| s.origin_of[v];
    let segments = match genus {
        Genus::Zero => {
            let path = s
                .cut_paths
                .first()
                .filter(|p| !p.closed && p.len() >= 3)
                .ok_or_else(|| Error::Segments("genus-zero segments need an open cut path of three or more vertices".into()))?;
            let pv = &path.vertices;
            let mut cumulative = vec![T::zero(); pv.len()];
            for t in 1..pv.len() {
                cumulative[t] = cumulative[t - 1] + norm3(sub3(s.mesh.vertex(pv[t]), s.mesh.vertex(pv[t - 1])));
            }
            let half = cumulative[pv.len() - 1] / T::lit(2.0);
            let mut best = 1;
            for t in 2..pv.len() - 1 {
                if (cumulative[t] - half).abs() < (cumulative[best] - half).abs() {
                    best = t;
                }
            }
            let w = pv[best];
            let rot = rotate_to(lp, pv[0]);
            let pos = |v: usize| rot.iter().position(|&x| x == v);
            let copies: Vec<usize> = (0..rot.len()).filter(|&i| origin(rot[i]) == w).collect();
            let kpos = pos(pv[pv.len() - 1]).ok_or_else(|| Error::Segments("path end not on boundary".into()))?;
            let [j, l] = copies[..] else {
                return Err(Error::Segments(format!("midpoint vertex {w} appears {} times on the boundary", copies.len())));
            };
            if !(0 < j && j < kpos && kpos < l) {
                return Err(Error::Segments("corner order inconsistent with boundary loop".into()));
            }
            build_segments(&rot, [0, j, kpos, l], genus)
        }
        Genus::One => {
            let [a, _b] = &s.cut_paths[..] else {
                return Err(Error::Segments("genus-one segments need two cut loops".into()));
            };
            let base = a.vertices[0];
            let corners: Vec<usize> = (0..lp.len()).filter(|&i| origin(lp[i]) == base).collect();
            if corners.len() != 4 {
                return Err(Error::Segments(format!("base vertex appears {} times on the boundary", corners.len())));
            }
            let start = corners
                .iter()
                .copied()
                .find(|&c| origin(lp[(c + 1) % lp.len()]) == a.vertices[1])
                .ok_or_else(|| Error::Segments("no boundary arc follows loop a forward".into()))?;
            let rot: Vec<usize> = lp[start..].iter().chain(&lp[..start]).copied().collect();
            let idx: Vec<usize> = (0..rot.len()).filter(|&i| origin(rot[i]) == base).collect();
            build_segments(&rot, [idx[0], idx[1], idx[2], idx[3]], genus)
        }
    };
    validate_segments(s, &segments)?;
    Ok(segments)
}

fn build_segments(rot: &[usize], [i, j, k, l]: [usize; 4], genus: Genus) -> BoundarySegments {
    debug_assert_eq!(i, 0);
    let e = rot[0..=j].to_vec();
    let f = rot[j..=k].to_vec();
    let g: Vec<usize> = rot[k..=l].iter().rev().copied().collect();
    let mut h = vec![rot[0]];
    h.extend(rot[l..].iter().rev());
    BoundarySegments { corners: [rot[0], rot[j], rot[k], rot[l]], e, f, g, h, genus }
}

fn validate_segments<T: Real>(s: &SlicedMesh<T>, seg: &BoundarySegments) -> Result<()> {
    let origin = |v: usize| s.origin_of[v];
    let same = |x: &[usize], y: &[usize]| x.len() == y.len() && x.iter().zip(y).all(|(&p, &q)| origin(p) == origin(q));
    let ok = match seg.genus {
        Genus::Zero => same(&seg.e, &seg.h) && same(&seg.f, &seg.g),
        Genus::One => same(&seg.e, &seg.g) && same(&seg.f, &seg.h),
    };
    if !ok {
        return Err(Error::Segments("boundary loop inconsistent with origin pairing".into()));
    }
    if [&seg.e, &seg.f, &seg.g, &seg.h].iter().any(|x| x.len() < 2) {
        return Err(Error::Segments("segment shorter than two vertices".into()));
    }
    Ok(())
}

/// Parses a loop file: two lines of whitespace-separated vertex indices.
pub fn parse_loops(text: &str) -> Result<(CutPath, CutPath)> {
    let mut loops = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse { line: ln + 1, message: format!("bad vertex index '{t}'") }))
            .collect::<Result<_>>()?;
        loops.push(CutPath::closed(v));
    }
    match <[CutPath; 2]>::try_from(loops) {
        Ok([a, b]) => Ok((a, b)),
        Err(l) => Err(Error::Parse { line: 0, message: format!("expected two loops, found {}", l.len()) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate;

    #[test]
    fn adjacent_path_has_two_vertices() {
        let m = generate::icosahedron::<f64>();
        let w = m.neighbors(0)[0];
        assert_eq!(shortest_path(&m, 0, w).unwrap().vertices, vec![0, w]);
    }

    #[test]
    fn tie_prefers_smaller_predecessor() {
        // Pyramid over a unit square split along 1-3: routes 0-1-2 and 0-3-2 cost the same.
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.5, 0.5, 5.0]];
        let faces = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4], [1, 0, 3], [3, 2, 1]];
        let m = TriMesh::new(v, faces).unwrap();
        assert_eq!(shortest_path(&m, 0, 2).unwrap().vertices, vec![0, 1, 2]);
    }

    #[test]
    fn octahedron_three_vertex_slit() {
        let m = generate::octahedron::<f64>();
        let path = CutPath::open(vec![0, 4, 1]);
        let s = slice_along_path(&m, &path).unwrap();
        assert_eq!(s.mesh.n_vertices(), 7);
        assert_eq!(s.mesh.n_faces(), 8);
        assert_eq!(s.mesh.euler_characteristic(), 1);
        let loops = s.mesh.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 4);
    }

    #[test]
    fn single_edge_slit_rejected() {
        let m = generate::octahedron::<f64>();
        assert!(matches!(slice_along_path(&m, &CutPath::open(vec![0, 4])), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn self_crossing_path_rejected() {
        let m = generate::octahedron::<f64>();
        assert!(matches!(slice_along_path(&m, &CutPath::open(vec![0, 4, 1, 4])), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn five_vertex_slit_segments() {
        let m = generate::icosphere::<f64>(2);
        let (lo, hi) = principal_axis_extremes(&m);
        let mut path = shortest_path(&m, lo, hi).unwrap();
        assert!(path.len() > 5);
        path.vertices.truncate(5);
        let s = slice_genus_zero_along(&m, &path).unwrap();
        let seg = s.segments().unwrap();
        assert_eq!(seg.e.len(), 3);
        assert_eq!(seg.h.len(), 3);
        assert_eq!(seg.f.len(), 3);
        assert_eq!(seg.g.len(), 3);
    }

    #[test]
    fn torus_canonical_loops() {
        let m = generate::torus::<f64>(16, 16, 1.0, 0.4);
        let (a, b) = generate::torus_loops(16, 16);
        let s = slice_genus_one(&m, &CutPath::closed(a), &CutPath::closed(b)).unwrap();
        assert_eq!(s.mesh.euler_characteristic(), 1);
        let loops = s.mesh.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 2 * 16 + 2 * 16);
        let seg = s.segments().unwrap();
        assert_eq!(seg.e.len(), 17);
        assert_eq!(seg.f.len(), 17);
        let base_copies = loops[0].0.iter().filter(|&&v| s.origin_of[v] == 0).count();
        assert_eq!(base_copies, 4);
    }

    #[test]
    fn loops_sharing_two_vertices_rejected() {
        let m = generate::torus::<f64>(16, 16, 1.0, 0.4);
        let (a, _) = generate::torus_loops(16, 16);
        // Ring loop (0,0), (1,1), ..., (15,1), (0,1) shares (0,0) and (0,1) with a.
        let nv = 16;
        let mut b = vec![generate::torus_index(nv, 0, 0)];
        for i in 1..16 {
            b.push(generate::torus_index(nv, i, 1));
        }
        b.push(generate::torus_index(nv, 0, 1));
        let err = slice_genus_one(&m, &CutPath::closed(a), &CutPath::closed(b)).unwrap_err();
        assert!(matches!(err, Error::LoopPrecondition(_)));
    }

    #[test]
    fn parse_loops_strips_closure() {
        let (a, b) = parse_loops("0 1 2 0\n0 5 6\n").unwrap();
        assert_eq!(a.vertices, vec![0, 1, 2]);
        assert_eq!(b.vertices, vec![0, 5, 6]);
        assert!(parse_loops("0 1 2\n").is_err());
    }
}
