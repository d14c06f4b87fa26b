//! Square-domain area-preserving parameterization of genus-zero and genus-one
//! triangle meshes.
//!
//! The pipeline slices a closed mesh into a disk, computes a fixed-point
//! initial map onto the unit square, minimizes the authalic energy with a
//! preconditioned nonlinear conjugate-gradient method, and repairs any folded
//! triangles with a mean-value correction. Parameterizations can be encoded
//! into geometry images and decoded back into meshes.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

pub mod bijectivity;
pub mod distance;
pub mod energy;
mod error;
pub mod geomimage;
pub mod geometry;
pub mod mesh;
pub mod param;
pub mod pipeline;
pub mod scalar;
pub mod slicer;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mesh = mesh::TriMesh<f64>;
pub type MeshF32 = mesh::TriMesh<f32>;
pub type Sliced = slicer::SlicedMesh<f64>;
pub type Map = param::ParamMap<f64>;
pub type MapF32 = param::ParamMap<f32>;
pub type Layout = param::FreeLayout<f64>;
pub type Matrix = sparse::CsrMatrix<f64>;
pub type Config = solver::SolverConfig<f64>;
pub type Image = geomimage::GeometryImage<f64>;
