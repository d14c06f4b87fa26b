//! Geometry images: regular-grid resampling of a square parameterization, and
//! reconstruction of a mesh from the grid.

mod beltrami;
mod decode;
mod encode;
mod storage;

pub use beltrami::{beltrami_coefficient, beltrami_stiffness, correct_angles, reconstruct, truncate, AngleCorrection, BeltramiField};
pub use decode::{angle_histogram, decode, grid_mesh, Decoded, WeldStatus, WELD_TOLERANCE};
pub use encode::{encode, PointLocator};
pub use storage::{read_image, write_f32, write_png, Sidecar, StorageFormat};

use serde::{Deserialize, Serialize};

use crate::geometry::Point3;
use crate::scalar::Real;
use crate::slicer::Genus;

/// Where samples sit in the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// `(i / (N-1), j / (N-1))`: the outer samples lie on the square sides, so
    /// identified sides carry identical samples and can be welded.
    LatticeCorners,
    /// `((i + 1/2) / N, (j + 1/2) / N)`.
    PixelCenters,
}

impl Sampling {
    pub fn coordinate<T: Real>(self, i: usize, n: usize) -> T {
        match self {
            Sampling::LatticeCorners if n == 1 => T::lit(0.5),
            Sampling::LatticeCorners => T::of_usize(i) / T::of_usize(n - 1),
            Sampling::PixelCenters => (T::of_usize(i) + T::lit(0.5)) / T::of_usize(n),
        }
    }
}

/// An `N x N` grid of surface positions. Sample `(i, j)` is at `samples[j * n + i]`,
/// with `i` along `u` and `j` along `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryImage<T> {
    pub n: usize,
    pub samples: Vec<Point3<T>>,
    pub genus: Genus,
    pub sampling: Sampling,
    /// Pixels that fell outside every image triangle and used the nearest one.
    pub fallback_pixels: usize,
}

impl<T: Real> GeometryImage<T> {
    #[inline]
    pub fn sample(&self, i: usize, j: usize) -> Point3<T> {
        self.samples[j * self.n + i]
    }

    /// Per-channel minimum and maximum.
    pub fn bounds(&self) -> (Point3<T>, Point3<T>) {
        let mut lo = [T::infinity(); 3];
        let mut hi = [T::neg_infinity(); 3];
        for p in &self.samples {
            for c in 0..3 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        (lo, hi)
    }
}
