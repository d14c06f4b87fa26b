//! Square-domain maps and the free-variable layout induced by the boundary constraints.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scalar::Real;
use crate::slicer::{BoundarySegments, Genus};
use crate::sparse::CsrMatrix;

/// Per-vertex planar coordinates `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamMap<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> ParamMap<T> {
    pub fn zeros(n: usize) -> Self {
        Self { u: vec![T::zero(); n], v: vec![T::zero(); n] }
    }

    pub fn from_points(points: &[Point2<T>]) -> Self {
        Self { u: points.iter().map(|p| p[0]).collect(), v: points.iter().map(|p| p[1]).collect() }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> Point2<T> {
        [self.u[i], self.v[i]]
    }

    pub fn points(&self) -> Vec<Point2<T>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn coord(&self, s: usize) -> &[T] {
        if s == 0 {
            &self.u
        } else {
            &self.v
        }
    }

    pub fn coord_mut(&mut self, s: usize) -> &mut Vec<T> {
        if s == 0 {
            &mut self.u
        } else {
            &mut self.v
        }
    }

    pub fn cast<U: Real>(&self) -> ParamMap<U> {
        ParamMap {
            u: self.u.iter().map(|x| U::lit(x.as_f64())).collect(),
            v: self.v.iter().map(|x| U::lit(x.as_f64())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot<T> {
    Fixed(T),
    Var(usize),
}

/// Maps between full per-vertex coordinates and the free-variable vector
/// `[u_I; v_I; u_E; v_F]`, where `E` and `F` exclude the corners.
///
/// Paired boundary vertices share one variable, so scattering a vector always
/// yields a map that satisfies the square constraints exactly.
#[derive(Debug, Clone)]
pub struct FreeLayout<T> {
    slots: [Vec<Slot<T>>; 2],
    owner: Vec<(usize, usize)>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    e_inner: Vec<usize>,
    f_inner: Vec<usize>,
    genus: Genus,
}

impl<T: Real> FreeLayout<T> {
    pub fn new(n: usize, seg: &BoundarySegments) -> Result<Self> {
        for (name, s) in [("E", &seg.e), ("F", &seg.f), ("G", &seg.g), ("H", &seg.h)] {
            if s.len() < 2 {
                return Err(Error::Segments(format!("segment {name} has fewer than two vertices")));
            }
        }
        let mut on_boundary = vec![false; n];
        for s in [&seg.e, &seg.f, &seg.g, &seg.h] {
            for &v in s {
                on_boundary[v] = true;
            }
        }
        let interior: Vec<usize> = (0..n).filter(|&v| !on_boundary[v]).collect();
        let boundary: Vec<usize> = (0..n).filter(|&v| on_boundary[v]).collect();
        let ni = interior.len();
        let e_inner = seg.e[1..seg.e.len() - 1].to_vec();
        let f_inner = seg.f[1..seg.f.len() - 1].to_vec();
        let e0 = 2 * ni;
        let f0 = e0 + e_inner.len();

        let mut slots: [Vec<Option<Slot<T>>>; 2] = [vec![None; n], vec![None; n]];
        let mut owner = Vec::with_capacity(f0 + f_inner.len());
        for (k, &v) in interior.iter().enumerate() {
            slots[0][v] = Some(Slot::Var(k));
            owner.push((v, 0));
        }
        for (k, &v) in interior.iter().enumerate() {
            slots[1][v] = Some(Slot::Var(ni + k));
            owner.push((v, 1));
        }
        owner.extend(e_inner.iter().map(|&v| (v, 0)));
        owner.extend(f_inner.iter().map(|&v| (v, 1)));

        let (zero, one) = (T::zero(), T::one());
        let mut assign = |v: usize, s: usize, slot: Slot<T>| -> Result<()> {
            match slots[s][v] {
                Some(cur) if cur != slot => Err(Error::Segments(format!("conflicting constraints at vertex {v}"))),
                _ => {
                    slots[s][v] = Some(slot);
                    Ok(())
                }
            }
        };
        // Sequence values along a side: ends pinned, inner entries bound to shared variables.
        let side = |len: usize, t: usize, base: usize| -> Slot<T> {
            if t == 0 {
                Slot::Fixed(zero)
            } else if t == len - 1 {
                Slot::Fixed(one)
            } else {
                Slot::Var(base + t - 1)
            }
        };
        let (ne, nf) = (seg.e.len(), seg.f.len());
        let paired = |a: &[usize], b: &[usize]| a.len() == b.len();
        match seg.genus {
            Genus::Zero => {
                if !paired(&seg.e, &seg.h) || !paired(&seg.f, &seg.g) {
                    return Err(Error::Segments("paired segments differ in length".into()));
                }
                for (t, &v) in seg.e.iter().enumerate() {
                    assign(v, 0, side(ne, t, e0))?;
                    assign(v, 1, Slot::Fixed(zero))?;
                }
                for (t, &v) in seg.h.iter().enumerate() {
                    assign(v, 0, Slot::Fixed(zero))?;
                    assign(v, 1, side(ne, t, e0))?;
                }
                for (t, &v) in seg.f.iter().enumerate() {
                    assign(v, 0, Slot::Fixed(one))?;
                    assign(v, 1, side(nf, t, f0))?;
                }
                for (t, &v) in seg.g.iter().enumerate() {
                    assign(v, 0, side(nf, t, f0))?;
                    assign(v, 1, Slot::Fixed(one))?;
                }
            }
            Genus::One => {
                if !paired(&seg.e, &seg.g) || !paired(&seg.f, &seg.h) {
                    return Err(Error::Segments("paired segments differ in length".into()));
                }
                for (t, &v) in seg.e.iter().enumerate() {
                    assign(v, 0, side(ne, t, e0))?;
                    assign(v, 1, Slot::Fixed(zero))?;
                }
                for (t, &v) in seg.g.iter().enumerate() {
                    assign(v, 0, side(ne, t, e0))?;
                    assign(v, 1, Slot::Fixed(one))?;
                }
                for (t, &v) in seg.f.iter().enumerate() {
                    assign(v, 0, Slot::Fixed(one))?;
                    assign(v, 1, side(nf, t, f0))?;
                }
                for (t, &v) in seg.h.iter().enumerate() {
                    assign(v, 0, Slot::Fixed(zero))?;
                    assign(v, 1, side(nf, t, f0))?;
                }
            }
        }
        let slots = slots.map(|c| c.into_iter().map(|x| x.expect("every vertex is interior or on a side")).collect::<Vec<_>>());
        let corner_values = [(0, 0), (1, 0), (1, 1), (0, 1)];
        for (&c, &(cu, cv)) in seg.corners.iter().zip(&corner_values) {
            let want = [T::of_usize(cu), T::of_usize(cv)];
            for s in 0..2 {
                if slots[s][c] != Slot::Fixed(want[s]) {
                    return Err(Error::Segments(format!("corner {c} is not pinned to its square corner")));
                }
            }
        }
        Ok(Self { slots, owner, interior, boundary, e_inner, f_inner, genus: seg.genus })
    }

    pub fn n_vertices(&self) -> usize {
        self.slots[0].len()
    }

    pub fn n_free(&self) -> usize {
        self.owner.len()
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn e_inner(&self) -> &[usize] {
        &self.e_inner
    }

    pub fn f_inner(&self) -> &[usize] {
        &self.f_inner
    }

    pub fn slot(&self, v: usize, s: usize) -> Slot<T> {
        self.slots[s][v]
    }

    /// Variable ranges for `u_I`, `v_I`, `u_E` and `v_F`.
    pub fn blocks(&self) -> [Range<usize>; 4] {
        let ni = self.interior.len();
        let e0 = 2 * ni;
        let f0 = e0 + self.e_inner.len();
        [0..ni, ni..e0, e0..f0, f0..f0 + self.f_inner.len()]
    }

    pub fn gather(&self, f: &ParamMap<T>) -> Vec<T> {
        self.owner.iter().map(|&(v, s)| f.coord(s)[v]).collect()
    }

    pub fn scatter(&self, x: &[T]) -> ParamMap<T> {
        assert_eq!(x.len(), self.n_free());
        let fill = |s: usize| {
            self.slots[s]
                .iter()
                .map(|slot| match *slot {
                    Slot::Fixed(c) => c,
                    Slot::Var(k) => x[k],
                })
                .collect()
        };
        ParamMap { u: fill(0), v: fill(1) }
    }

    /// Chain rule through the constraints: sums the per-vertex gradient rows sharing a variable.
    pub fn reduce_gradient(&self, gu: &[T], gv: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.n_free()];
        for (s, g) in [gu, gv].into_iter().enumerate() {
            for (v, slot) in self.slots[s].iter().enumerate() {
                if let Slot::Var(k) = *slot {
                    out[k] += g[v];
                }
            }
        }
        out
    }

    /// Reduces `1/2 sum_s f_s^T K f_s` to `1/2 x^T H x - b^T x + const`; returns `(H, b)`.
    pub fn reduce_quadratic(&self, k: &CsrMatrix<T>) -> (CsrMatrix<T>, Vec<T>) {
        let m = self.n_free();
        let mut trip = Vec::new();
        let mut rhs = vec![T::zero(); m];
        for s in 0..2 {
            for i in 0..k.rows() {
                let Slot::Var(a) = self.slots[s][i] else { continue };
                let (idx, val) = k.row(i);
                for (&j, &kij) in idx.iter().zip(val) {
                    match self.slots[s][j] {
                        Slot::Var(b) => trip.push((a, b, kij)),
                        Slot::Fixed(c) => rhs[a] -= kij * c,
                    }
                }
            }
        }
        (CsrMatrix::from_triplets(m, m, &trip), rhs)
    }

    /// Largest deviation of `f` from the constraint manifold.
    pub fn violation(&self, f: &ParamMap<T>) -> T {
        let x = self.gather(f);
        let mut worst = T::zero();
        for s in 0..2 {
            for (v, slot) in self.slots[s].iter().enumerate() {
                let want = match *slot {
                    Slot::Fixed(c) => c,
                    Slot::Var(k) => x[k],
                };
                worst = worst.max((f.coord(s)[v] - want).abs());
            }
        }
        worst
    }

    pub fn check(&self, f: &ParamMap<T>, tol: T) -> Result<()> {
        let worst = self.violation(f);
        if worst > tol || !worst.is_finite() {
            return Err(Error::ConstraintViolation { violation: worst.as_f64() });
        }
        Ok(())
    }

    /// Boundary map with uniformly spaced `E` and `F` sides; interior coordinates are zero.
    pub fn initial_boundary(&self) -> ParamMap<T> {
        let mut x = vec![T::zero(); self.n_free()];
        let [_, _, e, f] = self.blocks();
        let ne = T::of_usize(self.e_inner.len() + 1);
        let nf = T::of_usize(self.f_inner.len() + 1);
        for (t, k) in e.enumerate() {
            x[k] = T::of_usize(t + 1) / ne;
        }
        for (t, k) in f.enumerate() {
            x[k] = T::of_usize(t + 1) / nf;
        }
        self.scatter(&x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate;
    use crate::slicer::{slice_genus_one, CutPath};

    fn torus_layout() -> (crate::slicer::SlicedMesh<f64>, FreeLayout<f64>) {
        let m = generate::torus::<f64>(8, 6, 1.0, 0.4);
        let (a, b) = generate::torus_loops(8, 6);
        let s = slice_genus_one(&m, &CutPath::closed(a), &CutPath::closed(b)).unwrap();
        let layout = FreeLayout::new(s.mesh.n_vertices(), s.segments().unwrap()).unwrap();
        (s, layout)
    }

    #[test]
    fn genus_one_identification() {
        let (s, layout) = torus_layout();
        let seg = s.segments().unwrap();
        let f = layout.initial_boundary();
        for t in 0..seg.e.len() {
            assert_eq!(f.u[seg.g[t]], f.u[seg.e[t]]);
            assert_eq!(f.v[seg.e[t]], 0.0);
            assert_eq!(f.v[seg.g[t]], 1.0);
        }
        for t in 0..seg.f.len() {
            assert_eq!(f.v[seg.h[t]], f.v[seg.f[t]]);
        }
        assert_eq!(layout.violation(&f), 0.0);
    }

    #[test]
    fn uniform_three_vertex_side() {
        let m = generate::icosphere::<f64>(2);
        let (lo, hi) = crate::slicer::principal_axis_extremes(&m);
        let mut path = crate::slicer::shortest_path(&m, lo, hi).unwrap();
        path.vertices.truncate(5);
        let s = crate::slicer::slice_genus_zero_along(&m, &path).unwrap();
        let seg = s.segments().unwrap();
        let layout = FreeLayout::<f64>::new(s.mesh.n_vertices(), seg).unwrap();
        let f = layout.initial_boundary();
        let ue: Vec<f64> = seg.e.iter().map(|&v| f.u[v]).collect();
        assert_eq!(ue, vec![0.0, 0.5, 1.0]);
        for t in 0..seg.e.len() {
            assert_eq!(f.v[seg.h[t]], f.u[seg.e[t]]);
        }
    }

    #[test]
    fn scatter_gather_round_trip() {
        let (_, layout) = torus_layout();
        let x: Vec<f64> = (0..layout.n_free()).map(|k| (k as f64 * 0.1).sin().abs()).collect();
        let f = layout.scatter(&x);
        assert_eq!(layout.gather(&f), x);
        assert_eq!(layout.violation(&f), 0.0);
    }
}
