//! Constructors for Hamiltonians and Jacobi matrices from the data of each
//! source system, the Dirac-type reduction of smooth Hamiltonians, eikonals
//! and trace normalization.

mod density;
mod dirac;
mod eikonal;
pub(crate) mod jacobi;
mod potential;
mod reduction;

pub use density::build_h_from_density;
pub use dirac::{build_h_from_dirac, DiracHamiltonian};
pub use eikonal::{eikonal, eikonal_on, normalize_trace, CoordinateMap, Eikonal};
pub use jacobi::{build_h_jacobi, build_jacobi_from_partition, JacobiMatrix, JacobiOptions, JacobiSpec, JacobiSystem};
pub use potential::{build_h_from_potential, PotentialHamiltonian};
pub use reduction::{diagonalize_h, solve_amplitude_a, transport_amplitude, DiracReduction};

use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::scalar::Real;

/// Overflow guard shared by the Cauchy-problem integrators.
pub(crate) const OVERFLOW: f64 = 1e150;

pub(crate) fn check_samples<T: Real>(grid: &SpaceGrid<T>, v: &[T], what: &str) -> Result<()> {
    grid.ensure_len(v.len(), what)?;
    match v.iter().position(|x| !x.is_finite()) {
        Some(k) => Err(Error::NonFinite { index: k }),
        None => Ok(()),
    }
}
