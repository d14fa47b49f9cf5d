use num_complex::Complex;
use serde::Serialize;

use crate::field::{SpaceTime, Vec2};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::scalar::Real;

/// Which time levels a solver stores in full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Recording {
    /// Every time level.
    #[default]
    All,
    /// Every `k`-th level plus the last one.
    Every(usize),
    /// Only the last level.
    Final,
}

impl Recording {
    pub(crate) fn wants(&self, step: usize, last: usize) -> bool {
        match *self {
            Recording::All => true,
            Recording::Every(k) => step == last || step.is_multiple_of(k.max(1)),
            Recording::Final => step == last,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SolveOptions {
    pub recording: Recording,
}

impl SolveOptions {
    pub fn recording(recording: Recording) -> Self {
        Self { recording }
    }
}

/// Space-time samples of a solution.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldData<T> {
    /// Scalar field (wave equations, Jacobi chains).
    Scalar(SpaceTime<Complex<T>>),
    /// Two-component field.
    Vector(SpaceTime<Vec2<T>>),
}

impl<T: Real> FieldData<T> {
    pub fn steps(&self) -> &[usize] {
        match self {
            FieldData::Scalar(s) => s.steps(),
            FieldData::Vector(v) => v.steps(),
        }
    }

    pub fn as_vector(&self) -> Option<&SpaceTime<Vec2<T>>> {
        match self {
            FieldData::Vector(v) => Some(v),
            FieldData::Scalar(_) => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&SpaceTime<Complex<T>>> {
        match self {
            FieldData::Scalar(s) => Some(s),
            FieldData::Vector(_) => None,
        }
    }

    /// Largest magnitude over all stored samples.
    pub fn max_norm(&self) -> T {
        match self {
            FieldData::Scalar(s) => s
                .frames()
                .iter()
                .flatten()
                .map(|z| z.norm())
                .fold(T::zero(), T::max),
            FieldData::Vector(v) => v
                .frames()
                .iter()
                .flatten()
                .map(|z| (z[0].norm_sqr() + z[1].norm_sqr()).sqrt())
                .fold(T::zero(), T::max),
        }
    }
}

/// Solver metadata attached to every result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverMeta {
    pub system: String,
    pub scheme: String,
    /// Courant number `dt * max speed / h` (or `dt * |A|` for Jacobi chains).
    pub cfl: f64,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    pub t_max: f64,
    pub n_steps: usize,
    pub hamiltonian_hash: Option<u64>,
    /// Largest `|v_N|` over time for truncated Jacobi chains.
    pub tail_mass: Option<f64>,
    pub warnings: Vec<String>,
}

/// Output of a forward solve with zero initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult<T> {
    pub space: Option<SpaceGrid<T>>,
    pub time: TimeGrid<T>,
    pub field: FieldData<T>,
    /// Values of every component at `x = 0` (the first chain site for
    /// Jacobi systems), one entry per time level.
    pub boundary: Vec<Vec2<T>>,
    /// Response trace, one entry per time level.
    pub response: Vec<Complex<T>>,
    pub meta: SolverMeta,
}

impl<T: Real> EvolutionResult<T> {
    /// Stored two-component frame at time step `k`.
    pub fn vector_at(&self, k: usize) -> Option<&[Vec2<T>]> {
        self.field.as_vector().and_then(|v| v.at_step(k))
    }

    pub fn scalar_at(&self, k: usize) -> Option<&[Complex<T>]> {
        self.field.as_scalar().and_then(|v| v.at_step(k))
    }

    /// Largest `|boundary[c] - control|` for the controlled component `c`.
    pub fn control_mismatch(&self, c: usize, control: &[Complex<T>]) -> T {
        self.boundary
            .iter()
            .zip(control)
            .map(|(b, f)| (b[c] - *f).norm())
            .fold(T::zero(), T::max)
    }
}
