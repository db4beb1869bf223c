//! Piecewise-linear finite elements on (possibly strongly anisotropic)
//! triangle meshes, together with Hessian-based a posteriori error
//! estimators for the interpolation error and the discretization error.
//!
//! All numerical code is generic over a [`Scalar`] (any IEEE float that
//! implements the `num-traits` float traits). The `*64` / `*32` aliases at
//! the crate root pin the common instantiations.
//!
//! Module map:
//!
//! - [`mesh`]: triangulation storage, per-cell geometry, generators, file I/O
//!   (native format and Triangle `.node`/`.ele`).
//! - [`quadrature`]: fixed triangle and edge rules.
//! - [`fem`]: P1 assembly, Dirichlet data, SPD solve, interpolation.
//! - [`field_io`]: text files of nodal values and nodal Hessians.
//! - [`hessian`]: exact sampling and quadratic-fit recovery of nodal Hessians.
//! - [`estimators`]: interpolation and discretization error estimators.
//! - [`bench`]: exact-solution catalog, true errors and efficiency tables.

pub mod bench;
pub mod error;
pub mod estimators;
pub mod fem;
pub mod field_io;
pub mod geom;
pub mod hessian;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod sparse;

pub use error::{Error, Result};
pub use geom::{Sym2, Vec2};
pub use scalar::Scalar;

pub type Mesh64 = mesh::Mesh<f64>;
pub type Mesh32 = mesh::Mesh<f32>;
pub type CellGeometry64 = mesh::CellGeometry<f64>;
pub type ProblemSpec64 = fem::ProblemSpec<f64>;
pub type ProblemSpec32 = fem::ProblemSpec<f32>;
pub type NodalField64 = fem::NodalField<f64>;
pub type HessianField64 = hessian::HessianField<f64>;
pub type EstimatorReport64 = estimators::EstimatorReport<f64>;
pub type TableRow64 = bench::TableRow<f64>;
pub type Vec2f64 = geom::Vec2<f64>;
pub type Sym2f64 = geom::Sym2<f64>;
