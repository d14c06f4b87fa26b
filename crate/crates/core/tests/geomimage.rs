mod common;

use std::sync::OnceLock;

use num_complex::Complex;
use proptest::prelude::*;
use squaremap::geomimage::{
    angle_histogram, beltrami_coefficient, decode, encode, grid_mesh, read_image, reconstruct, truncate, write_f32, write_png,
    BeltramiField, GeometryImage, Sampling, WeldStatus, WELD_TOLERANCE,
};
use squaremap::mesh::{generate, TriMesh};
use squaremap::param::{FreeLayout, ParamMap};
use squaremap::pipeline::{run, PipelineConfig, PipelineOutput};
use squaremap::slicer::{CutPath, Genus};

fn sphere_run() -> &'static PipelineOutput {
    static RUN: OnceLock<PipelineOutput> = OnceLock::new();
    RUN.get_or_init(|| run(&generate::icosphere(3), &PipelineConfig::default()).unwrap())
}

/// Flat grid lifted to the height field `z = x y` with a smooth, fold-free warp of the square.
fn warped_square(n: usize) -> (TriMesh<f64>, ParamMap<f64>) {
    let flat = generate::flat_grid::<f64>(n, n);
    let verts = flat.vertices().iter().map(|p| [p[0], p[1], p[0] * p[1]]).collect();
    let mesh = TriMesh::new(verts, flat.faces().to_vec()).unwrap();
    let pi = std::f64::consts::PI;
    let (u, v) = flat
        .vertices()
        .iter()
        .map(|p| {
            let bump = (pi * p[0]).sin() * (pi * p[1]).sin();
            (p[0] + 0.08 * bump, p[1] - 0.05 * bump)
        })
        .unzip();
    (mesh, ParamMap { u, v })
}

#[test]
fn identity_flat_image_at_pixel_centers() {
    let mesh = generate::flat_grid::<f64>(3, 3);
    let img = encode(&mesh, &common::identity_map(&mesh), 4, Genus::Zero, Sampling::PixelCenters).unwrap();
    assert_eq!(img.fallback_pixels, 0);
    for j in 0..4 {
        for i in 0..4 {
            let p = img.sample(i, j);
            let want = [(i as f64 + 0.5) / 4.0, (j as f64 + 0.5) / 4.0, 0.0];
            for c in 0..3 {
                assert!((p[c] - want[c]).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn samples_match_dense_rasterizer() {
    let (mesh, map) = warped_square(5);
    let n = 8;
    for sampling in [Sampling::LatticeCorners, Sampling::PixelCenters] {
        let img = encode(&mesh, &map, n, Genus::Zero, sampling).unwrap();
        for j in 0..n {
            for i in 0..n {
                let q = [sampling.coordinate::<f64>(i, n), sampling.coordinate::<f64>(j, n)];
                // Brute force: best barycentric containment over every face.
                let mut best = (f64::NEG_INFINITY, [0.0; 3]);
                for f in 0..mesh.n_faces() {
                    let [a, b, c] = mesh.face(f).map(|v| map.point(v));
                    let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                    let l1 = ((q[0] - a[0]) * (c[1] - a[1]) - (q[1] - a[1]) * (c[0] - a[0])) / det;
                    let l2 = ((b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])) / det;
                    let l = [1.0 - l1 - l2, l1, l2];
                    let worst = l.iter().cloned().fold(f64::INFINITY, f64::min);
                    if worst > best.0 {
                        let [pa, pb, pc] = mesh.face(f).map(|v| mesh.vertex(v));
                        best = (worst, [0, 1, 2].map(|s| l[0] * pa[s] + l[1] * pb[s] + l[2] * pc[s]));
                    }
                }
                assert!(best.0 >= -1e-12);
                let p = img.sample(i, j);
                for s in 0..3 {
                    assert!((p[s] - best.1[s]).abs() < 1e-12, "pixel ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn angle_histogram_of_known_meshes() {
    let ico = generate::icosahedron::<f64>();
    let h = angle_histogram(&ico, 18);
    assert_eq!(h[6], 60);
    assert_eq!(h.iter().sum::<usize>(), 60);
    // Right isosceles halves of grid squares: two 45 degree corners and one right angle per face.
    let grid = generate::flat_grid::<f64>(3, 3);
    let h = angle_histogram(&grid, 4);
    assert_eq!(h, vec![0, 2 * grid.n_faces(), grid.n_faces(), 0]);
}

#[test]
fn folded_maps_are_rejected() {
    let (mesh, mut map) = warped_square(4);
    map.u.swap(6, 7);
    assert!(encode(&mesh, &map, 8, Genus::Zero, Sampling::LatticeCorners).is_err());
    assert!(encode(&mesh, &common::identity_map(&mesh), 1, Genus::Zero, Sampling::LatticeCorners).is_err());
}

#[test]
fn grid_mesh_counts() {
    for n in [2, 3, 7] {
        let img = GeometryImage {
            n,
            samples: (0..n * n).map(|k| [(k % n) as f64, (k / n) as f64, 0.0]).collect(),
            genus: Genus::Zero,
            sampling: Sampling::LatticeCorners,
            fallback_pixels: 0,
        };
        let (v, f) = grid_mesh(&img);
        assert_eq!(v.len(), n * n + (n - 1) * (n - 1));
        assert_eq!(f.len(), 4 * (n - 1) * (n - 1));
        let open = TriMesh::new(v, f).unwrap();
        assert_eq!(open.euler_characteristic(), 1);
    }
}

#[test]
fn sphere_image_welds_closed() {
    let out = sphere_run();
    let img = encode(&out.sliced.mesh, &out.map, 33, Genus::Zero, Sampling::LatticeCorners).unwrap();
    assert_eq!(img.fallback_pixels, 0);
    let n = img.n;
    let tol = WELD_TOLERANCE * out.sliced.mesh.bbox_diagonal();
    let dist = |a: [f64; 3], b: [f64; 3]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    for t in 0..n {
        assert!(dist(img.sample(t, 0), img.sample(0, t)) <= tol);
        assert!(dist(img.sample(n - 1, t), img.sample(t, n - 1)) <= tol);
    }
    let d = decode(&img).unwrap();
    assert_eq!(d.status, WeldStatus::Welded);
    assert!(d.mesh.is_closed());
    assert_eq!(d.mesh.euler_characteristic(), 2);
}

#[test]
fn torus_image_welds_to_torus() {
    let (nu, nv) = (16, 16);
    let (a, b) = generate::torus_loops(nu, nv);
    let cfg = PipelineConfig { genus: Genus::One, loops: Some((CutPath::closed(a), CutPath::closed(b))), ..Default::default() };
    let out = run(&generate::torus(nu, nv, 1.0, 0.4), &cfg).unwrap();
    let img = encode(&out.sliced.mesh, &out.map, 40, Genus::One, Sampling::LatticeCorners).unwrap();
    let d = decode(&img).unwrap();
    assert_eq!(d.status, WeldStatus::Welded);
    assert!(d.mesh.is_closed());
    assert_eq!(d.mesh.euler_characteristic(), 0);
}

#[test]
fn pixel_centers_decode_open() {
    let out = sphere_run();
    let img = encode(&out.sliced.mesh, &out.map, 16, Genus::Zero, Sampling::PixelCenters).unwrap();
    let d = decode(&img).unwrap();
    assert!(matches!(d.status, WeldStatus::Open(_)));
    assert!(!d.mesh.is_closed());
}

#[test]
fn storage_round_trips() {
    let out = sphere_run();
    let img = encode(&out.sliced.mesh, &out.map, 24, Genus::Zero, Sampling::LatticeCorners).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let png = dir.path().join("img.png");
    let meta = write_png(&img, &png).unwrap();
    let back: GeometryImage<f64> = read_image(&png).unwrap();
    assert_eq!((back.n, back.genus, back.sampling), (img.n, img.genus, img.sampling));
    for (p, q) in img.samples.iter().zip(&back.samples) {
        for c in 0..3 {
            let bound = (meta.max[c] - meta.min[c]) / 65536.0;
            assert!((p[c] - q[c]).abs() <= bound);
        }
    }

    let raw = dir.path().join("img.f32");
    write_f32(&img, &raw).unwrap();
    let back: GeometryImage<f64> = read_image(&raw).unwrap();
    for (p, q) in img.samples.iter().zip(&back.samples) {
        for c in 0..3 {
            assert_eq!(p[c] as f32, q[c] as f32);
        }
    }
}

fn flat_layout(n: usize) -> FreeLayout<f64> {
    FreeLayout::new((n + 1) * (n + 1), &generate::flat_grid_segments(n, n, Genus::Zero)).unwrap()
}

#[test]
fn zero_field_reconstructs_the_reference_map() {
    let (mesh, map) = warped_square(10);
    let layout = flat_layout(10);
    let zero = BeltramiField { mu: vec![Complex::new(0.0, 0.0); mesh.n_faces()] };
    let back = reconstruct(&mesh, &map, &zero, &layout).unwrap();
    for v in 0..mesh.n_vertices() {
        assert!((back.u[v] - map.u[v]).abs() < 1e-9 && (back.v[v] - map.v[v]).abs() < 1e-9);
    }
}

#[test]
fn small_field_is_reproduced() {
    // flat_grid(23, 23) has 1058 faces.
    let mesh = generate::flat_grid::<f64>(23, 23);
    let id = common::identity_map(&mesh);
    let (_, to) = warped_square(23);
    let layout = flat_layout(23);
    let mu = beltrami_coefficient(&mesh, &id, &to).unwrap();
    assert!(mu.max_norm() < 0.8);
    let back = reconstruct(&mesh, &id, &truncate(&mu, 0.8).unwrap(), &layout).unwrap();
    let out = beltrami_coefficient(&mesh, &id, &back).unwrap();
    let err = mu.mu.iter().zip(&out.mu).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err <= 0.05, "max deviation {err}");
}

#[test]
fn strong_field_is_capped() {
    // u = phi(x), v = phi(y) with phi' = 1 + a cos(2 pi t): mu = (phi'(x) - phi'(y)) / (phi'(x) + phi'(y)).
    let n = 24;
    let mesh = generate::flat_grid::<f64>(n, n);
    let id = common::identity_map(&mesh);
    let layout = flat_layout(n);
    let tau = 2.0 * std::f64::consts::PI;
    let a = 0.961;
    let phi = |t: f64| t + a * (tau * t).sin() / tau;
    let to = ParamMap { u: id.u.iter().map(|&x| phi(x)).collect(), v: id.v.iter().map(|&y| phi(y)).collect() };
    let field = beltrami_coefficient(&mesh, &id, &to).unwrap();
    assert!((field.max_norm() - 0.95).abs() < 0.01, "input max |mu| {}", field.max_norm());
    let back = reconstruct(&mesh, &id, &truncate(&field, 0.8).unwrap(), &layout).unwrap();
    let out = beltrami_coefficient(&mesh, &id, &back).unwrap();
    assert!(out.max_norm() <= 0.85, "max |mu| {}", out.max_norm());
}

proptest! {
    #[test]
    fn truncation_is_idempotent(
        parts in proptest::collection::vec((0.0f64..0.999, -3.2f64..3.2), 1..40),
        delta in 0.05f64..0.99,
    ) {
        let field = BeltramiField { mu: parts.iter().map(|&(r, t)| Complex::from_polar(r, t)).collect() };
        let once = truncate(&field, delta).unwrap();
        prop_assert!(once.mu.iter().all(|m| m.norm() <= delta * (1.0 + 1e-12)));
        prop_assert_eq!(truncate(&once, delta).unwrap(), once.clone());
        for (a, b) in field.mu.iter().zip(&once.mu) {
            if a.norm() < delta {
                prop_assert_eq!(a, b);
            }
        }
    }
}
