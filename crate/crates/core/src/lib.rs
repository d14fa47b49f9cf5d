//! Numerical laboratory for canonical systems.
//!
//! The crate builds canonical systems equivalent to the wave equation with a
//! potential or a density, the Dirac system and Jacobi systems, solves them in
//! the time domain, compares their response operators, and provides the
//! frequency-domain de Branges objects and Boundary Control operators for
//! smooth strictly positive Hamiltonians.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` comparisons are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bcmethod;
pub mod builders;
pub mod error;
pub mod field;
pub mod frequency;
pub mod grid;
pub mod hamiltonian;
pub mod interp;
pub mod io;
pub mod linalg;
pub mod mat2;
pub mod ode;
pub mod quadrature;
pub mod response;
pub mod scalar;
pub mod timedomain;

pub use error::{Error, Result};
pub use field::{smoothed_delta, BoundaryControl, Bump, Evolution, Snapshot, SpaceTime, Vec2};
pub use grid::{SpaceGrid, TimeGrid};
pub use hamiltonian::{HamiltonianClass, HamiltonianField};
pub use mat2::{CMat2, Sym2, SymEigen};
pub use response::ResponseMatrix;
pub use quadrature::{quad_inner, quad_inner_with, Quadrature};
pub use scalar::{Cplx, Real};

pub type SpaceGrid64 = SpaceGrid<f64>;
pub type TimeGrid64 = TimeGrid<f64>;
pub type Snapshot64 = Snapshot<f64>;
pub type BoundaryControl64 = BoundaryControl<f64>;
pub type HamiltonianField64 = HamiltonianField<f64>;
pub type Sym2_64 = Sym2<f64>;
pub type ControlBasis64 = bcmethod::ControlBasis<f64>;
pub type ControlOperatorMatrix64 = bcmethod::ControlOperatorMatrix<f64>;
pub type BTElement64 = bcmethod::BTElement<f64>;
