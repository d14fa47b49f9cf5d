//! Leapfrog solvers for the wave equation with a potential or a density.

use num_complex::Complex;

use crate::builders::check_samples;
use crate::error::{Error, Result};
use crate::field::{BoundaryControl, SpaceTime};
use crate::grid::SpaceGrid;
use crate::interp::one_sided_start;
use crate::scalar::{czero, Real};

use super::dirac::{check_cfl, check_truncation};
use super::result::{EvolutionResult, FieldData, SolveOptions, SolverMeta};

const SCHEME: &str = "leapfrog, Dirichlet control, one-sided u_x(0)";

/// Shared leapfrog loop for `u_tt = c2 (u_xx) - m u`, with per-node
/// `c2 = dt^2 / (rho h^2)` and `m = dt^2 q`.
fn leapfrog<T: Real>(
    coef: &[T],
    mass: &[T],
    f: &BoundaryControl<T>,
    space: &SpaceGrid<T>,
    opts: &SolveOptions,
) -> (SpaceTime<Complex<T>>, Vec<[Complex<T>; 2]>, Vec<Complex<T>>) {
    let n = space.len();
    let h = space.h();
    let last = f.grid().n_steps();
    let mut prev = vec![czero::<T>(); n];
    let mut cur = vec![czero::<T>(); n];
    let mut next = vec![czero::<T>(); n];
    let mut field = SpaceTime::new();
    let mut boundary = Vec::with_capacity(last + 1);
    let mut response = Vec::with_capacity(last + 1);
    let two = T::lit(2.0);
    let mut record = |k: usize, u: &[Complex<T>]| {
        let ux = one_sided_start(u, h);
        boundary.push([u[0], ux]);
        response.push(ux);
        if opts.recording.wants(k, last) {
            field.push(k, u.to_vec());
        }
    };
    record(0, &cur);
    for k in 0..last {
        for i in 1..n - 1 {
            let lap = cur[i + 1] - cur[i] * two + cur[i - 1];
            let base = if k == 0 {
                // zero initial data and velocity: first step is half a leapfrog step
                cur[i] + lap * (coef[i] / two) - cur[i] * (mass[i] / two)
            } else {
                cur[i] * two - prev[i] + lap * coef[i] - cur[i] * mass[i]
            };
            next[i] = base;
        }
        next[0] = f.at(k + 1);
        next[n - 1] = czero();
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        record(k + 1, &cur);
    }
    (field, boundary, response)
}

fn meta<T: Real>(system: &str, cfl: T, space: &SpaceGrid<T>, f: &BoundaryControl<T>) -> SolverMeta {
    SolverMeta {
        system: system.into(),
        scheme: SCHEME.into(),
        cfl: cfl.as_f64(),
        x_max: Some(space.x_max().as_f64()),
        n_points: Some(space.len()),
        t_max: f.grid().t_max().as_f64(),
        n_steps: f.grid().n_steps(),
        hamiltonian_hash: None,
        tail_mass: None,
        warnings: Vec::new(),
    }
}

/// `u_tt - u_xx + q u = 0`, `u(0, t) = f`; response `u_x(0, t)`.
pub fn solve_wave_potential<T: Real>(
    q: &[T],
    f: &BoundaryControl<T>,
    space: &SpaceGrid<T>,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    check_samples(space, q, "potential")?;
    let dt = f.grid().dt();
    let cfl = check_cfl(dt, T::one(), space.h())?;
    check_truncation(space, T::one(), f.grid().t_max())?;
    let lam2 = (dt / space.h()).powi(2);
    let coef = vec![lam2; space.len()];
    let mass: Vec<T> = q.iter().map(|&v| v * dt * dt).collect();
    let (field, boundary, response) = leapfrog(&coef, &mass, f, space, opts);
    Ok(EvolutionResult {
        space: Some(*space),
        time: *f.grid(),
        field: FieldData::Scalar(field),
        boundary,
        response,
        meta: meta("wave equation with potential", cfl, space, f),
    })
}

/// `rho u_tt = u_xx`, `u(0, t) = f`; response `u_x(0, t)`.
pub fn solve_wave_density<T: Real>(
    rho: &[T],
    f: &BoundaryControl<T>,
    space: &SpaceGrid<T>,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    check_samples(space, rho, "density")?;
    if let Some((i, &r)) = rho.iter().enumerate().find(|(_, r)| !(**r > T::zero())) {
        return Err(Error::NonPositive {
            x: space.x(i).as_f64(),
            value: r.as_f64(),
        });
    }
    let dt = f.grid().dt();
    let min_rho = rho.iter().copied().fold(T::infinity(), T::min);
    let speed = T::one() / min_rho.sqrt();
    let cfl = check_cfl(dt, speed, space.h())?;
    check_truncation(space, speed, f.grid().t_max())?;
    let lam2 = (dt / space.h()).powi(2);
    let coef: Vec<T> = rho.iter().map(|&r| lam2 / r).collect();
    let mass = vec![T::zero(); space.len()];
    let (field, boundary, response) = leapfrog(&coef, &mass, f, space, opts);
    Ok(EvolutionResult {
        space: Some(*space),
        time: *f.grid(),
        field: FieldData::Scalar(field),
        boundary,
        response,
        meta: meta("wave equation with density", cfl, space, f),
    })
}
