use thiserror::Error;

use crate::sparse::FactorError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
#[non_exhaustive]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("non-triangular face at line {line}")]
    NonTriangularFace { line: usize },
    #[error("face {face} references vertex {vertex} out of range")]
    IndexOutOfRange { face: usize, vertex: usize },
    #[error("face {face} is degenerate")]
    DegenerateFace { face: usize },
    #[error("face {face} repeats face {first}")]
    DuplicateFace { face: usize, first: usize },
    #[error("vertex {vertex} is not referenced by any face")]
    UnreferencedVertex { vertex: usize },
    #[error("non-manifold edge ({a}, {b}) has more than two adjacent faces")]
    NonManifoldEdge { a: usize, b: usize },
    #[error("inconsistent orientation that cannot be repaired near face {face}")]
    Orientation { face: usize },
    #[error("mesh is not closed")]
    NotClosed,
    #[error("odd Euler characteristic {chi}")]
    OddEulerCharacteristic { chi: i64 },
    #[error("mesh has zero area")]
    ZeroArea,
    #[error("invalid cut path: {0}")]
    InvalidPath(String),
    #[error("mesh is disconnected: no path from {from} to {to}")]
    Disconnected { from: usize, to: usize },
    #[error("face classification stalled with {unassigned} faces unassigned")]
    PropagationStalled { unassigned: usize },
    #[error("slicing produced an inconsistent mesh: {0}")]
    SliceInconsistent(String),
    #[error("loop precondition violated: {0}")]
    LoopPrecondition(String),
    #[error("boundary segments inconsistent: {0}")]
    Segments(String),
    #[error("boundary constraints violated by {violation:e}")]
    ConstraintViolation { violation: f64 },
    #[error("image area is zero")]
    ZeroImageArea,
    #[error("linear solve failed: {0}")]
    Factor(#[from] FactorError),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("search direction is not a descent direction")]
    NotDescent,
    #[error("mapped endpoints of edge ({a}, {b}) coincide")]
    CoincidentVertices { a: usize, b: usize },
    #[error("source triangle {face} is degenerate")]
    DegenerateSource { face: usize },
    #[error("Beltrami coefficient magnitude {magnitude} on face {face} is not below one")]
    NotQuasiconformal { face: usize, magnitude: f64 },
    #[error("invalid geometry image: {0}")]
    Image(String),
}
