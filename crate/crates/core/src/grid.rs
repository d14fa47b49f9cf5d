//! Uniform space and time grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid on `[0, x_max]` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceGrid<T> {
    x_max: T,
    n_points: usize,
}

impl<T: Real> SpaceGrid<T> {
    pub fn new(x_max: T, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        if !(x_max > T::zero()) || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!("x_max must be positive, got {x_max}")));
        }
        Ok(Self { x_max, n_points })
    }

    /// Grid on `[0, x_max]` whose spacing is at most `h`.
    pub fn with_spacing(x_max: T, h: T) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let cells = (x_max / h - T::tol(1e-9)).ceil().to_usize().unwrap_or(0).max(2);
        Self::new(x_max, cells + 1)
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> T {
        self.x_max / T::count(self.n_points - 1)
    }

    pub fn x(&self, i: usize) -> T {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.h() * T::count(i)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn sample<F: Fn(T) -> T>(&self, f: F) -> Vec<T> {
        self.points().map(f).collect()
    }

    /// Index of the last node with `x_i <= x`.
    pub fn cell_of(&self, x: T) -> usize {
        let k = (x / self.h()).floor().to_usize().unwrap_or(0);
        k.min(self.n_points - 2)
    }

    /// Same node positions (up to relative rounding).
    pub fn matches(&self, other: &Self) -> bool {
        self.n_points == other.n_points
            && (self.x_max - other.x_max).abs() <= T::tol(1e-12) * self.x_max.max(T::one())
    }

    pub(crate) fn ensure_matches(&self, other: &Self, what: &str) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what}: ({}, {}) vs ({}, {})",
                self.x_max, self.n_points, other.x_max, other.n_points
            )))
        }
    }

    pub(crate) fn ensure_len(&self, n: usize, what: &str) -> Result<()> {
        if n == self.n_points {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what} has {n} samples, grid has {}",
                self.n_points
            )))
        }
    }

    /// Doubles the resolution (halves `h`).
    pub fn refined(&self) -> Self {
        Self {
            x_max: self.x_max,
            n_points: 2 * (self.n_points - 1) + 1,
        }
    }
}

/// Uniform time grid `t_k = k dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid<T> {
    t_max: T,
    n_steps: usize,
    /// Courant number `dt * max_speed / h` recorded by hyperbolic constructors.
    cfl: Option<T>,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_max: T, n_steps: usize) -> Result<Self> {
        if n_steps < 1 {
            return Err(Error::InvalidGrid("need at least one time step".into()));
        }
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        Ok(Self {
            t_max,
            n_steps,
            cfl: None,
        })
    }

    /// Time grid with `dt <= cfl * h / max_speed`, recording the Courant number.
    pub fn for_speed(t_max: T, h: T, max_speed: T, cfl: T) -> Result<Self> {
        if !(max_speed > T::zero()) || !(h > T::zero()) {
            return Err(Error::InvalidGrid("speed and spacing must be positive".into()));
        }
        let dt_max = cfl * h / max_speed;
        let steps = (t_max / dt_max - T::tol(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
        let mut g = Self::new(t_max, steps)?;
        g.cfl = Some(g.dt() * max_speed / h);
        Ok(g)
    }

    /// Time grid with exactly the step `dt` (`t_max` rounded to a multiple of it).
    pub fn with_step(dt: T, n_steps: usize) -> Result<Self> {
        Self::new(dt * T::count(n_steps), n_steps)
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> T {
        self.t_max / T::count(self.n_steps)
    }

    pub fn t(&self, k: usize) -> T {
        if k == self.n_steps {
            self.t_max
        } else {
            self.dt() * T::count(k)
        }
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..=self.n_steps).map(move |k| self.t(k))
    }

    pub fn cfl(&self) -> Option<T> {
        self.cfl
    }

    pub fn matches(&self, other: &Self) -> bool {
        self.n_steps == other.n_steps
            && (self.t_max - other.t_max).abs() <= T::tol(1e-12) * self.t_max.max(T::one())
    }

    pub(crate) fn ensure_matches(&self, other: &Self, what: &str) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{what}: ({}, {}) vs ({}, {})",
                self.t_max, self.n_steps, other.t_max, other.n_steps
            )))
        }
    }

    pub fn refined(&self) -> Self {
        Self {
            t_max: self.t_max,
            n_steps: 2 * self.n_steps,
            cfl: self.cfl,
        }
    }
}
