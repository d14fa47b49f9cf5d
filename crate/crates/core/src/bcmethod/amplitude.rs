//! Leading wavefront amplitude of the forward Dirac-type solution.

use serde::Serialize;

use crate::builders::{solve_amplitude_a, transport_amplitude, DiracReduction};
use crate::error::{Error, Result};
use crate::field::{BoundaryControl, Snapshot, Vec2};
use crate::scalar::{creal, imag_unit, Real};
use crate::timedomain::EvolutionResult;

/// Largest bump half-width, as a fraction of `T`, for which the front is
/// still a local feature.
pub const MAX_WIDTH_FRACTION: f64 = 0.125;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeProfile {
    /// `max_x | |A(x)|/|A(0)| / (|V_front(x)|/|V_front(0)|) - 1 |`.
    pub max_rel_deviation: f64,
    /// `|A(x)| / |A(0)|` on the sampled nodes.
    pub ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefrontReport {
    pub center: f64,
    pub width: f64,
    /// Node positions where the front was sampled.
    pub x: Vec<f64>,
    /// `|V_front(x)| / |V_front(0)|`.
    pub front_ratio: Vec<f64>,
    /// Against the amplitude passed in.
    pub given: AmplitudeProfile,
    /// Against the transport amplitude along the outgoing characteristic.
    pub transport: AmplitudeProfile,
    /// Largest `|V|` strictly ahead of the support of the front.
    pub ahead_of_front: f64,
}

fn norm2<T: Real>(v: &Vec2<T>) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt().as_f64()
}

/// Centroid of `|f|` and half-width of the support.
fn locate<T: Real>(f: &BoundaryControl<T>) -> Result<(f64, f64)> {
    let time = f.grid();
    let (mut m, mut c) = (0.0, 0.0);
    for (k, v) in f.samples().iter().enumerate() {
        let a = v.norm().as_f64();
        m += a;
        c += a * time.t(k).as_f64();
    }
    if !(m > 0.0) {
        return Err(Error::InvalidControl("zero control has no wavefront".into()));
    }
    let (a, b) = f.support();
    Ok((c / m, 0.5 * (b - a).as_f64()))
}

fn profile(front: &[f64], amp: &[f64]) -> AmplitudeProfile {
    let ratio: Vec<f64> = amp.iter().map(|a| a / amp[0]).collect();
    let max_rel_deviation = ratio
        .iter()
        .zip(front)
        .map(|(r, f)| (r / f - 1.0).abs())
        .fold(0.0, f64::max);
    AmplitudeProfile { max_rel_deviation, ratio }
}

/// Samples `V` along `t = tau(x) + center` by linear interpolation between
/// stored frames and compares the modulus profile with `|A|`.
///
/// `result` must come from the forward Dirac-type solver on `red` with
/// every time level recorded.
pub fn wavefront_amplitude<T: Real>(
    result: &EvolutionResult<T>,
    red: &DiracReduction<T>,
    a: &Snapshot<T>,
    control: &BoundaryControl<T>,
) -> Result<WavefrontReport> {
    let time = result.time;
    let t_max = time.t_max().as_f64();
    let dt = time.dt().as_f64();
    let (center, width) = locate(control)?;
    if width > MAX_WIDTH_FRACTION * t_max {
        return Err(Error::Precondition(format!(
            "bump half-width {width} exceeds {MAX_WIDTH_FRACTION} T; the front is not localized"
        )));
    }
    let space = result
        .space
        .ok_or_else(|| Error::Precondition("result has no spatial grid".into()))?;
    space.ensure_matches(red.grid(), "result and reduction")?;
    if a.len() != space.len() {
        return Err(Error::GridMismatch(format!("amplitude has {} samples, grid has {}", a.len(), space.len())));
    }
    let field = result
        .field
        .as_vector()
        .ok_or_else(|| Error::Precondition("wavefront needs a two-component field".into()))?;
    if !field.is_complete(time.len()) {
        return Err(Error::Precondition("wavefront needs every time level recorded".into()));
    }
    let frames = field.frames();
    let tau: Vec<f64> = red.tau().iter().map(|t| t.as_f64()).collect();
    let h = space.h().as_f64();
    let speed = red.max_speed().as_f64();
    let smear = 2.0 * (h / speed).max(dt);

    let mut xs = Vec::new();
    let mut front = Vec::new();
    let mut idx = Vec::new();
    for (i, &ti) in tau.iter().enumerate() {
        let t = ti + center;
        if t > t_max {
            break;
        }
        let s = t / dt;
        let k = (s.floor() as usize).min(time.n_steps().saturating_sub(1));
        let w = creal(T::lit(s - k as f64));
        let one = creal(T::one());
        let (u, v) = (frames[k][i], frames[k + 1][i]);
        let val = [u[0] * (one - w) + v[0] * w, u[1] * (one - w) + v[1] * w];
        xs.push(space.x(i).as_f64());
        front.push(norm2(&val));
        idx.push(i);
    }
    if front.len() < 2 || !(front[0] > 0.0) {
        return Err(Error::Precondition("front not resolved inside the horizon".into()));
    }
    let f0 = front[0];
    let front_ratio: Vec<f64> = front.iter().map(|f| f / f0).collect();
    let given_amp: Vec<f64> = idx.iter().map(|&i| norm2(&a.values()[i])).collect();
    if !(given_amp[0] > 0.0) {
        return Err(Error::InvalidArgument("amplitude vanishes at x = 0".into()));
    }
    let tr = transport_amplitude(red);
    let tr_amp: Vec<f64> = idx.iter().map(|&i| norm2(&tr.values()[i])).collect();

    let start = center - width;
    let mut ahead = 0.0_f64;
    for (k, frame) in frames.iter().enumerate() {
        let t = time.t(field.steps()[k]).as_f64();
        for (i, v) in frame.iter().enumerate() {
            if tau[i] > t - start + smear {
                ahead = ahead.max(norm2(v));
            }
        }
    }
    Ok(WavefrontReport {
        center,
        width,
        x: xs,
        given: profile(&front_ratio, &given_amp),
        transport: profile(&front_ratio, &tr_amp),
        front_ratio,
        ahead_of_front: ahead,
    })
}

/// [`solve_amplitude_a`] started from the boundary direction of the forward
/// system, `(sqrt(d2), i sqrt(d1))` at `x = 0`.
pub fn boundary_amplitude<T: Real>(red: &DiracReduction<T>) -> Result<Snapshot<T>> {
    let (a, b) = (red.d1()[0].sqrt(), red.d2()[0].sqrt());
    solve_amplitude_a(red, [creal(b), imag_unit::<T>() * a])
}
