use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::hamiltonian::{HamiltonianClass, HamiltonianField};
use crate::mat2::Sym2;
use crate::ode::{rk4_step, Sampled, State};
use crate::scalar::Real;

use super::{check_samples, OVERFLOW};

/// Gram Hamiltonian of a Dirac potential and the fundamental matrix
/// `A = [Y^1 Y^2]` (columns) it came from.
#[derive(Debug, Clone)]
pub struct DiracHamiltonian<T> {
    pub field: HamiltonianField<T>,
    /// `A[k] = [[Y^1_1, Y^2_1], [Y^1_2, Y^2_2]]` at node `k`.
    pub a: Vec<[[T; 2]; 2]>,
}

impl<T: Real> DiracHamiltonian<T> {
    pub fn max_det_defect(&self) -> T {
        self.a
            .iter()
            .map(|m| (m[0][0] * m[1][1] - m[0][1] * m[1][0] - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Solves `J Y' + V Y = 0`, `V = [[p, q], [q, -p]]`, for `Y(0) = I` by RK4
/// and returns `H = A^T A`.
pub fn build_h_from_dirac<T: Real>(p: &[T], q: &[T], grid: &SpaceGrid<T>) -> Result<DiracHamiltonian<T>> {
    check_samples(grid, p, "Dirac p")?;
    check_samples(grid, q, "Dirac q")?;
    let ps = Sampled::new::<T>(p.to_vec());
    let qs = Sampled::new::<T>(q.to_vec());
    // Y' = J V Y, J V = [[q, -p], [-p, -q]]
    let rhs = |k: usize, stage, y: State<T, 4>| {
        let (pk, qk) = (ps.get(k, stage), qs.get(k, stage));
        let [a1, a2, b1, b2] = y.0;
        State([
            qk * a1 - pk * a2,
            -pk * a1 - qk * a2,
            qk * b1 - pk * b2,
            -pk * b1 - qk * b2,
        ])
    };
    let n = grid.len();
    let mut y = State([T::one(), T::zero(), T::zero(), T::one()]);
    let mut a = Vec::with_capacity(n);
    a.push([[T::one(), T::zero()], [T::zero(), T::one()]]);
    for k in 0..n - 1 {
        y = rk4_step(y, k, grid.h(), &rhs);
        if y.0.iter().any(|v| !(v.abs() < T::lit(OVERFLOW))) {
            return Err(Error::Overflow {
                x: grid.x(k + 1).as_f64(),
            });
        }
        let [a1, a2, b1, b2] = y.0;
        a.push([[a1, b1], [a2, b2]]);
    }
    let samples: Vec<Sym2<T>> = a
        .iter()
        .map(|m| {
            let (c1, c2) = ([m[0][0], m[1][0]], [m[0][1], m[1][1]]);
            Sym2::new(
                c1[0] * c1[0] + c1[1] * c1[1],
                c1[0] * c2[0] + c1[1] * c2[1],
                c2[0] * c2[0] + c2[1] * c2[1],
            )
        })
        .collect();
    let delta = samples.iter().map(|s| s.min_eigenvalue()).fold(T::infinity(), T::min);
    if !(delta > T::zero()) {
        return Err(Error::ClassViolation(format!("Gram Hamiltonian degenerate (min eigenvalue {delta})")));
    }
    let field = HamiltonianField::sampled(*grid, samples, Some(HamiltonianClass::StrictlyPositive { delta }))?;
    Ok(DiracHamiltonian { field, a })
}
