//! Maps solutions of the classical systems to the fields of their canonical
//! counterparts.

use num_complex::Complex;

use crate::builders::{DiracHamiltonian, PotentialHamiltonian};
use crate::error::{Error, Result};
use crate::field::{SpaceTime, Vec2};
use crate::grid::SpaceGrid;
use crate::interp::derivative4;
use crate::scalar::{cplx, Real};

use super::result::EvolutionResult;

fn wave_frames<T: Real>(u: &EvolutionResult<T>, n: usize) -> Result<(&SpaceTime<Complex<T>>, SpaceGrid<T>)> {
    let space = u
        .space
        .ok_or_else(|| Error::InvalidArgument("field has no spatial grid".into()))?;
    space.ensure_len(n, "fundamental solutions")?;
    let data = u
        .field
        .as_scalar()
        .ok_or_else(|| Error::InvalidArgument("expected a scalar wave field".into()))?;
    Ok((data, space))
}

/// `(c^1, c^2)` with `u = c^1 y_1 + c^2 y_2` and `c^1_x y_1 + c^2_x y_2 = 0`:
/// `c^1 = y_2' u - y_2 u_x`, `c^2 = -y_1' u + y_1 u_x` (unit Wronskian).
/// `u_x` is fourth order inside and third order at the two nodes nearest
/// each end, so residuals of the result stay second order up to `x = 0`.
pub fn canonical_fields_from_wave<T: Real>(
    u: &EvolutionResult<T>,
    pot: &PotentialHamiltonian<T>,
) -> Result<SpaceTime<Vec2<T>>> {
    let (data, space) = wave_frames(u, pot.y1.len())?;
    let h = space.h();
    let mut out = SpaceTime::new();
    for (&step, frame) in data.steps().iter().zip(data.frames()) {
        let ux = derivative4(frame, h);
        let c = (0..frame.len())
            .map(|i| {
                [
                    frame[i] * pot.y2p[i] - ux[i] * pot.y2[i],
                    ux[i] * pot.y1[i] - frame[i] * pot.y1p[i],
                ]
            })
            .collect();
        out.push(step, c);
    }
    Ok(out)
}

/// `C = (u_t, i u_x)` for the wave equation with a density. `u_t` is taken by
/// centered differences in time, so every level must be recorded.
pub fn canonical_fields_from_density_wave<T: Real>(u: &EvolutionResult<T>) -> Result<SpaceTime<Vec2<T>>> {
    let space = u
        .space
        .ok_or_else(|| Error::InvalidArgument("field has no spatial grid".into()))?;
    let (data, _) = wave_frames(u, space.len())?;
    if !data.is_complete(u.time.len()) {
        return Err(Error::Precondition("time derivative needs every level recorded".into()));
    }
    let frames = data.frames();
    if frames.len() < 3 {
        return Err(Error::Precondition("need at least three time levels".into()));
    }
    let (h, dt) = (space.h(), u.time.dt());
    let i = cplx(T::zero(), T::one());
    let mut out = SpaceTime::new();
    for (k, frame) in frames.iter().enumerate() {
        let ux = derivative4(frame, h);
        let c = (0..frame.len())
            .map(|x| [time_derivative(|j| frames[j][x], k, frames.len(), dt), i * ux[x]])
            .collect();
        out.push(k, c);
    }
    Ok(out)
}

/// Second-order time derivative of a sampled series at level `k`.
fn time_derivative<T: Real>(v: impl Fn(usize) -> Complex<T>, k: usize, len: usize, dt: T) -> Complex<T> {
    let inv = T::one() / (T::lit(2.0) * dt);
    if k == 0 {
        (v(1) * T::lit(4.0) - v(0) * T::lit(3.0) - v(2)) * inv
    } else if k + 1 == len {
        (v(k) * T::lit(3.0) - v(k - 1) * T::lit(4.0) + v(k - 2)) * inv
    } else {
        (v(k + 1) - v(k - 1)) * inv
    }
}

/// `C = A^{-1} u` for the Dirac system, `A = [Y^1 Y^2]` with `det A = 1`.
pub fn canonical_fields_from_dirac<T: Real>(
    u: &EvolutionResult<T>,
    dh: &DiracHamiltonian<T>,
) -> Result<SpaceTime<Vec2<T>>> {
    let data = u
        .field
        .as_vector()
        .ok_or_else(|| Error::InvalidArgument("expected a two-component Dirac field".into()))?;
    let space = u
        .space
        .ok_or_else(|| Error::InvalidArgument("field has no spatial grid".into()))?;
    space.ensure_len(dh.a.len(), "Dirac fundamental matrix")?;
    Ok(data.map_frames(|frame| {
        frame
            .iter()
            .zip(&dh.a)
            .map(|(v, m)| {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                [
                    (v[0] * m[1][1] - v[1] * m[0][1]) / det,
                    (v[1] * m[0][0] - v[0] * m[1][0]) / det,
                ]
            })
            .collect()
    }))
}

/// Component `c` of the field at `x = 0`, one value per stored level.
pub fn boundary_trace<T: Real>(field: &SpaceTime<Vec2<T>>, c: usize) -> Vec<Complex<T>> {
    field.frames().iter().map(|f| f[0][c]).collect()
}

/// Component `c` at `x = 0` extrapolated from the first three interior
/// nodes (`3 v_1 - 3 v_2 + v_3`), independent of any boundary stencil.
pub fn extrapolated_trace<T: Real>(field: &SpaceTime<Vec2<T>>, c: usize) -> Vec<Complex<T>> {
    let three = T::lit(3.0);
    field
        .frames()
        .iter()
        .map(|f| f[1][c] * three - f[2][c] * three + f[3][c])
        .collect()
}
