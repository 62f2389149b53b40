//! Closest point method for elliptic PDEs on curves and surfaces.
//!
//! The surface PDE `-Δ_S u + c u = f` (and its scalar variable-diffusivity
//! generalisation) is posed on a narrow band of a uniform Cartesian grid
//! surrounding the surface.  Differential operators act in the embedding
//! space; closest-point extensions keep the discrete solution constant along
//! surface normals.  The discrete system is
//!
//! ```text
//! A u = f,   A = (c + γ) I − E_p L − γ E_q
//! ```
//!
//! where `L` is the centered Laplacian on the band, `E_p`/`E_q` interpolate
//! grid data at closest points with tensor-product barycentric Lagrange
//! weights of degree `p`/`q`, and `γ` balances the side condition against the
//! consistency condition.
//!
//! Systems are solved either directly (LU) or with a closest-point geometric
//! multigrid V-cycle whose smoother alternates Jacobi relaxation on the
//! shifted Cartesian Laplacian with a closest-point extension
//! (Ruuth–Merriman style), and whose grid transfers are themselves
//! closest-point extensions between band grids.

pub mod band;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod linalg;
pub mod multigrid;
pub mod operators;
pub mod point;
pub mod problems;
pub mod run;
pub mod sparse;

pub use error::{Error, Result};
