use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::hamiltonian::{HamiltonianClass, HamiltonianField};
use crate::mat2::Sym2;
use crate::ode::{rk4_step, Sampled, State};
use crate::scalar::Real;

use super::{check_samples, OVERFLOW};

/// Rank-one Hamiltonian `[[y1^2, y1 y2], [y1 y2, y2^2]]` of a Schrödinger
/// potential together with the fundamental pair it came from.
#[derive(Debug, Clone)]
pub struct PotentialHamiltonian<T> {
    pub field: HamiltonianField<T>,
    pub y1: Vec<T>,
    pub y1p: Vec<T>,
    pub y2: Vec<T>,
    pub y2p: Vec<T>,
    /// `y1 y2' - y1' y2` at every node.
    pub wronskian: Vec<T>,
}

impl<T: Real> PotentialHamiltonian<T> {
    pub fn max_wronskian_defect(&self) -> T {
        self.wronskian
            .iter()
            .map(|w| (*w - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Solves `-y'' + q y = 0` for the cosine-type and sine-type solutions by RK4
/// on the grid and assembles the rank-one Hamiltonian.
pub fn build_h_from_potential<T: Real>(q: &[T], grid: &SpaceGrid<T>) -> Result<PotentialHamiltonian<T>> {
    check_samples(grid, q, "potential")?;
    let qs = Sampled::new::<T>(q.to_vec());
    let h = grid.h();
    let rhs = |k: usize, stage, y: State<T, 4>| {
        let qk = qs.get(k, stage);
        let [a, ap, b, bp] = y.0;
        State([ap, qk * a, bp, qk * b])
    };
    let n = grid.len();
    let mut y = State([T::one(), T::zero(), T::zero(), T::one()]);
    let mut out = Vec::with_capacity(n);
    out.push(y.0);
    for k in 0..n - 1 {
        y = rk4_step(y, k, h, &rhs);
        if y.0.iter().any(|v| !(v.abs() < T::lit(OVERFLOW))) {
            return Err(Error::Overflow {
                x: grid.x(k + 1).as_f64(),
            });
        }
        out.push(y.0);
    }
    let y1: Vec<T> = out.iter().map(|s| s[0]).collect();
    let y1p: Vec<T> = out.iter().map(|s| s[1]).collect();
    let y2: Vec<T> = out.iter().map(|s| s[2]).collect();
    let y2p: Vec<T> = out.iter().map(|s| s[3]).collect();
    let wronskian = out.iter().map(|s| s[0] * s[3] - s[1] * s[2]).collect();
    let samples = y1
        .iter()
        .zip(&y2)
        .map(|(&a, &b)| Sym2::new(a * a, a * b, b * b))
        .collect();
    let field = HamiltonianField::sampled(*grid, samples, Some(HamiltonianClass::RankOne))?;
    Ok(PotentialHamiltonian {
        field,
        y1,
        y1p,
        y2,
        y2p,
        wronskian,
    })
}
