mod common;

use std::collections::{BinaryHeap, HashMap};

use proptest::prelude::*;
use squaremap::mesh::{generate, TriMesh};
use squaremap::slicer::{
    principal_axis_extremes, shortest_path, slice_along_path, slice_genus_zero_along, CutPath, Genus, SlicedMesh,
};

fn check_sliced(original: &TriMesh<f64>, s: &SlicedMesh<f64>) {
    assert_eq!(s.mesh.euler_characteristic(), 1);
    assert_eq!(s.mesh.boundary_loops().len(), 1);
    assert_eq!(s.mesh.n_faces(), original.n_faces());
    assert!((s.mesh.total_area() - original.total_area()).abs() <= 1e-12 * original.total_area());
    for (v, &o) in s.origin_of.iter().enumerate() {
        assert_eq!(s.mesh.vertex(v), original.vertex(o));
    }
    let seg = s.segments().unwrap();
    let origin = |v: usize| s.origin_of[v];
    let pairs = match seg.genus {
        Genus::Zero => [(&seg.e, &seg.h), (&seg.f, &seg.g)],
        Genus::One => [(&seg.e, &seg.g), (&seg.f, &seg.h)],
    };
    for (x, y) in pairs {
        assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(y.iter()) {
            assert_eq!(origin(*p), origin(*q));
        }
    }
    let [bi, bj, bk, bl] = seg.corners;
    assert_eq!((seg.e[0], *seg.e.last().unwrap()), (bi, bj));
    assert_eq!((seg.f[0], *seg.f.last().unwrap()), (bj, bk));
    assert_eq!((seg.g[0], *seg.g.last().unwrap()), (bl, bk));
    assert_eq!((seg.h[0], *seg.h.last().unwrap()), (bi, bl));
    let mut cycle = seg.boundary_cycle();
    let mut boundary = s.mesh.boundary_loops()[0].0.clone();
    cycle.sort_unstable();
    boundary.sort_unstable();
    assert_eq!(cycle, boundary);
}

/// All-pairs shortest path lengths by Floyd-Warshall.
fn floyd(mesh: &TriMesh<f64>) -> Vec<Vec<f64>> {
    let n = mesh.n_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (a, b) in mesh.edges() {
        let p = mesh.vertex(a);
        let q = mesh.vertex(b);
        let l = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
        d[a][b] = l;
        d[b][a] = l;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn path_cost(mesh: &TriMesh<f64>, p: &CutPath) -> f64 {
    p.arc_length(mesh)
}

#[test]
fn principal_axis_of_stretched_ellipsoid() {
    let mesh = generate::ellipsoid::<f64>(2, [4.0, 1.0, 1.0]);
    let (lo, hi) = principal_axis_extremes(&mesh);
    let xs: Vec<f64> = mesh.vertices().iter().map(|p| p[0]).collect();
    let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let got = [xs[lo], xs[hi]];
    assert!(got.contains(&min) && got.contains(&max));
}

#[test]
fn principal_axis_of_tetrahedron_is_distinct() {
    let mesh = generate::tetrahedron::<f64>();
    let (a, b) = principal_axis_extremes(&mesh);
    assert_ne!(a, b);
}

#[test]
fn shortest_paths_match_floyd_warshall() {
    let mesh = generate::icosahedron_unit_edge::<f64>();
    let d = floyd(&mesh);
    for a in 0..mesh.n_vertices() {
        for b in 0..mesh.n_vertices() {
            if a == b {
                continue;
            }
            let p = shortest_path(&mesh, a, b).unwrap();
            assert_eq!(p.vertices[0], a);
            assert_eq!(*p.vertices.last().unwrap(), b);
            assert!((path_cost(&mesh, &p) - d[a][b]).abs() < 1e-12);
        }
    }
}

#[test]
fn dijkstra_tree_matches_heap_oracle() {
    // Independent binary-heap Dijkstra on the subdivided sphere.
    let mesh = generate::icosphere::<f64>(2);
    let n = mesh.n_vertices();
    let mut adj: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for (a, b) in mesh.edges() {
        let (p, q) = (mesh.vertex(a), mesh.vertex(b));
        let l = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
        adj.entry(a).or_default().push((b, l));
        adj.entry(b).or_default().push((a, l));
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[0] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push((std::cmp::Reverse(0u64), 0usize));
    while let Some((std::cmp::Reverse(dk), v)) = heap.pop() {
        if f64::from_bits(dk) > dist[v] {
            continue;
        }
        for &(w, l) in &adj[&v] {
            let nd = dist[v] + l;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push((std::cmp::Reverse(nd.to_bits()), w));
            }
        }
    }
    let (ours, _) = squaremap::slicer::dijkstra(&mesh, 0);
    for v in 0..n {
        assert!((ours[v] - dist[v]).abs() < 1e-12);
    }
}

#[test]
fn genus_one_torus_boundary() {
    let nu = 16;
    let mesh = generate::torus::<f64>(nu, nu, 1.0, 0.4);
    let (a, b) = generate::torus_loops(nu, nu);
    let s = squaremap::slicer::slice_genus_one(&mesh, &CutPath::closed(a.clone()), &CutPath::closed(b.clone())).unwrap();
    check_sliced(&mesh, &s);
    let lp = &s.mesh.boundary_loops()[0];
    // Every loop vertex appears twice on the boundary; the base vertex four times.
    assert_eq!(lp.len(), 2 * a.len() + 2 * b.len());
    let base_copies = lp.vertices().iter().filter(|&&v| s.origin_of[v] == a[0]).count();
    assert_eq!(base_copies, 4);
    let seg = s.segments().unwrap();
    assert_eq!(seg.e.len(), a.len() + 1);
    assert_eq!(seg.f.len(), b.len() + 1);
}

#[test]
fn midpoint_tie_takes_lower_arc_length() {
    // Straight edge of unit steps from (0,0,0) to (3,0,0): cumulative 0,1,2,3, two candidates tie.
    let mesh = common::lattice_box(3, 1, 1);
    let find = |p: [f64; 3]| mesh.vertices().iter().position(|q| *q == p).unwrap();
    let path: Vec<usize> = (0..4).map(|x| find([x as f64, 0.0, 0.0])).collect();
    let s = slice_genus_zero_along(&mesh, &CutPath::open(path.clone())).unwrap();
    check_sliced(&mesh, &s);
    let seg = s.segments().unwrap();
    assert_eq!(s.origin_of[seg.corners[1]], path[1]);
    assert_eq!(s.origin_of[seg.corners[3]], path[1]);
    assert_eq!(seg.e.len(), 2);
    assert_eq!(seg.f.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn geodesic_slits_of_icosphere(a in 0usize..162, b in 0usize..162) {
        let mesh = generate::icosphere::<f64>(2);
        prop_assume!(a != b && !mesh.has_edge(a, b));
        let path = shortest_path(&mesh, a, b).unwrap();
        let k = path.len();
        let s = slice_along_path(&mesh, &path).unwrap();
        prop_assert_eq!(s.mesh.n_vertices(), mesh.n_vertices() + k - 2);
        let loops = s.mesh.boundary_loops();
        prop_assert_eq!(loops.len(), 1);
        prop_assert_eq!(loops[0].len(), 2 * k - 2);
        prop_assert_eq!(s.mesh.euler_characteristic(), 1);
        let s = slice_genus_zero_along(&mesh, &path).unwrap();
        check_sliced(&mesh, &s);
    }

    #[test]
    fn torus_grids_slice_to_disks(nu in 3usize..12, nv in 3usize..12) {
        let mesh = generate::torus::<f64>(nu, nv, 1.0, 0.35);
        let (a, b) = generate::torus_loops(nu, nv);
        let s = squaremap::slicer::slice_genus_one(&mesh, &CutPath::closed(a), &CutPath::closed(b)).unwrap();
        check_sliced(&mesh, &s);
    }
}
