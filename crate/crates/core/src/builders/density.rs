use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::hamiltonian::{HamiltonianClass, HamiltonianField};
use crate::mat2::Sym2;
use crate::scalar::Real;

use super::check_samples;

/// `H = diag(rho, 1)` of the wave equation with density.
pub fn build_h_from_density<T: Real>(rho: &[T], grid: &SpaceGrid<T>) -> Result<HamiltonianField<T>> {
    check_samples(grid, rho, "density")?;
    if let Some(k) = rho.iter().position(|&r| !(r > T::zero())) {
        return Err(Error::NonPositive {
            x: grid.x(k).as_f64(),
            value: rho[k].as_f64(),
        });
    }
    let delta = rho.iter().fold(T::one(), |m, &r| m.min(r));
    let samples = rho.iter().map(|&r| Sym2::diag(r, T::one())).collect();
    HamiltonianField::sampled(*grid, samples, Some(HamiltonianClass::StrictlyPositive { delta }))
}
