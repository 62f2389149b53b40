//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Query point is (numerically) equidistant from distinct surface
    /// regions, or sits on a known degenerate locus such as a circle center.
    #[error("closest point undefined at ({x:?}): {reason}")]
    MedialAxis { x: [f64; 3], reason: &'static str },

    /// Newton iteration for a closest-point query failed from every seed.
    #[error("closest-point Newton iteration failed to converge at ({x:?})")]
    NoConvergence { x: [f64; 3] },

    /// Band construction could not close all stencils.
    #[error("band too narrow: {0}")]
    BandTooNarrow(String),

    /// An interpolation stencil references a grid point outside the band.
    #[error("stencil escapes band near ({x:?})")]
    StencilEscapesBand { x: [f64; 3] },

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is singular (pivot {pivot:.3e} at step {step})")]
    Singular { step: usize, pivot: f64 },

    #[error("diffusivity must be positive, got {value} at band point {index}")]
    NonpositiveDiffusivity { index: usize, value: f64 },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("surface does not support this operation: {0}")]
    Unsupported(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
