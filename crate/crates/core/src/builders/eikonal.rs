use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::hamiltonian::{HamiltonianClass, HamiltonianField};
use crate::interp::{cubic_at, linear_at, monotone_inverse};
use crate::quadrature::cumulative_trapezoid;
use crate::scalar::Real;

/// Travel time `tau(x) = int_0^x sqrt(det H)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Eikonal<T> {
    grid: SpaceGrid<T>,
    tau: Vec<T>,
}

impl<T: Real> Eikonal<T> {
    pub fn from_samples(grid: SpaceGrid<T>, tau: Vec<T>) -> Result<Self> {
        grid.ensure_len(tau.len(), "eikonal")?;
        Ok(Self { grid, tau })
    }

    pub fn grid(&self) -> &SpaceGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.tau
    }

    /// `tau(x)` by linear interpolation.
    pub fn at(&self, x: T) -> T {
        linear_at(&self.tau, x / self.grid.h())
    }

    /// Inverse map `x(t)`; `None` outside `[0, tau(x_max)]` or when `tau` is
    /// flat (nowhere strictly increasing).
    pub fn inverse(&self, t: T) -> Option<T> {
        if self.tau[self.tau.len() - 1] <= self.tau[0] {
            return None;
        }
        monotone_inverse(&self.tau, t).map(|s| s * self.grid.h())
    }

    pub fn total(&self) -> T {
        self.tau[self.tau.len() - 1]
    }
}

/// Eikonal of a sampled Hamiltonian.
pub fn eikonal<T: Real>(h: &HamiltonianField<T>) -> Result<Eikonal<T>> {
    let grid = *h.require_grid()?;
    eikonal_on(h, &grid)
}

/// Eikonal of any Hamiltonian sampled on `grid` (piecewise fields are
/// evaluated pointwise).
pub fn eikonal_on<T: Real>(h: &HamiltonianField<T>, grid: &SpaceGrid<T>) -> Result<Eikonal<T>> {
    let w: Vec<T> = h
        .sample_on(grid)
        .iter()
        .map(|s| s.det().max(T::zero()).sqrt())
        .collect();
    Eikonal::from_samples(*grid, cumulative_trapezoid(&w, grid.h()))
}

/// Monotone change of variable `x -> x~ = int_0^x tr H`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMap<T> {
    original: SpaceGrid<T>,
    /// `x~` at the nodes of the original grid.
    forward: Vec<T>,
    /// Uniform grid in `x~`.
    target: SpaceGrid<T>,
}

impl<T: Real> CoordinateMap<T> {
    pub fn original(&self) -> &SpaceGrid<T> {
        &self.original
    }

    pub fn target(&self) -> &SpaceGrid<T> {
        &self.target
    }

    pub fn forward_values(&self) -> &[T] {
        &self.forward
    }

    /// `x~(x)`.
    pub fn forward(&self, x: T) -> T {
        cubic_at(&self.forward, x / self.original.h())
    }

    /// `x(x~)`.
    pub fn inverse(&self, xt: T) -> Option<T> {
        monotone_inverse(&self.forward, xt).map(|s| {
            // one Newton correction on the cubic forward map
            let x = s * self.original.h();
            let h = self.original.h();
            let slope = (self.forward(x + h * T::lit(0.5)) - self.forward(x - h * T::lit(0.5))) / h;
            if slope > T::zero() {
                (x - (self.forward(x) - xt) / slope).max(T::zero()).min(self.original.x_max())
            } else {
                x
            }
        })
    }

    /// Pulls samples on the target grid back to the original grid.
    pub fn pull_back<V>(&self, values: &[V]) -> Vec<V>
    where
        V: Copy + std::ops::Add<Output = V> + std::ops::Sub<Output = V> + std::ops::Mul<T, Output = V>,
    {
        let h = self.target.h();
        self.forward.iter().map(|&xt| cubic_at(values, xt / h)).collect()
    }
}

/// Rescales `H` to unit trace in the coordinate `x~ = int tr H`; the
/// returned field lives on a uniform `x~` grid with as many nodes as the
/// input.
pub fn normalize_trace<T: Real>(h: &HamiltonianField<T>) -> Result<(HamiltonianField<T>, CoordinateMap<T>)> {
    let grid = *h.require_grid()?;
    let tr = h.traces().expect("sampled");
    let floor = T::tol(1e-12) * h.max_abs().max(T::one());
    if let Some(k) = tr.iter().position(|&t| !(t > floor)) {
        return Err(Error::VanishingTrace { x: grid.x(k).as_f64() });
    }
    let forward = cumulative_trapezoid(tr, grid.h());
    let target = SpaceGrid::new(forward[forward.len() - 1], grid.len())?;
    let map = CoordinateMap {
        original: grid,
        forward,
        target,
    };
    let samples = h.samples().expect("sampled");
    let s = grid.h();
    let new: Vec<_> = target
        .points()
        .enumerate()
        .map(|(k, xt)| {
            let x = if k == 0 {
                T::zero()
            } else if k == target.len() - 1 {
                grid.x_max()
            } else {
                map.inverse(xt).unwrap_or(grid.x_max())
            };
            let m = cubic_at(samples, x / s);
            m * (T::one() / m.trace())
        })
        .collect();
    let class = match h.class() {
        Some(HamiltonianClass::RankOne) => Some(HamiltonianClass::RankOne),
        _ => None,
    };
    Ok((HamiltonianField::sampled(target, new, class)?, map))
}
