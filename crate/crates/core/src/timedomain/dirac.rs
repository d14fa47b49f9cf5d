//! Dirac, Dirac-type and first-order canonical systems.

use num_complex::Complex;
use serde::Serialize;

use crate::builders::{diagonalize_h, DiracReduction};
use crate::error::{Error, Result};
use crate::field::{BoundaryControl, Evolution, Vec2};
use crate::grid::SpaceGrid;
use crate::hamiltonian::HamiltonianField;
use crate::interp::{cubic_at, derivative, monotone_inverse};
use crate::scalar::{cplx, Real};

use super::characteristic::{march, Boundary, Coefficients};
use super::result::{EvolutionResult, FieldData, SolveOptions, SolverMeta};

/// Forward system `iDV_t + JV_x + psi V = 0` or auxiliary
/// `iDU_t - JU_x - psi U = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiracSign {
    Forward,
    Auxiliary,
}

impl DiracSign {
    fn eps<T: Real>(self) -> T {
        match self {
            DiracSign::Forward => T::one(),
            DiracSign::Auxiliary => -T::one(),
        }
    }
}

/// Orientation of a first-order canonical system:
/// `iHY_t - JY_x = 0` (`Standard`) or `iHZ_t + JZ_x = 0` (`Reversed`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Standard,
    Reversed,
}

pub(crate) fn check_cfl<T: Real>(dt: T, max_speed: T, h: T) -> Result<T> {
    let courant = dt * max_speed / h;
    if courant > T::one() + T::tol(1e-12) {
        return Err(Error::Cfl {
            dt: dt.as_f64(),
            bound: (h / max_speed).as_f64(),
        });
    }
    Ok(courant)
}

pub(crate) fn check_truncation<T: Real>(space: &SpaceGrid<T>, max_speed: T, t_max: T) -> Result<()> {
    let required = max_speed * t_max + T::lit(10.0) * space.h();
    if space.x_max() < required * (T::one() - T::tol(1e-12)) {
        return Err(Error::Truncation {
            x_max: space.x_max().as_f64(),
            required: required.as_f64(),
        });
    }
    Ok(())
}

/// Nodes of the travel-time grid `sigma_m = m dt` covering `[0, sigma_max]`.
fn sigma_nodes<T: Real>(sigma_max: T, dt: T) -> usize {
    (sigma_max / dt + T::tol(1e-9)).floor().to_usize().unwrap_or(0) + 1
}

/// Characteristic variables at `sigma` (cubic in the node index).
#[inline]
fn sample_rs<T: Real>(r: &[Complex<T>], s: &[Complex<T>], sigma: T, dt: T) -> (Complex<T>, Complex<T>) {
    let p = (sigma / dt).max(T::zero()).min(T::count(r.len() - 1));
    (cubic_at(r, p), cubic_at(s, p))
}

struct Marched<T> {
    field: Evolution<T>,
    boundary: Vec<Vec2<T>>,
    response: Vec<Complex<T>>,
}

fn run<T: Real>(
    coef: &Coefficients<T>,
    bc: &Boundary<T>,
    control: &BoundaryControl<T>,
    sigma_at_x: &[T],
    opts: &SolveOptions,
    at_x: impl Fn(usize, Complex<T>, Complex<T>) -> Vec2<T>,
    at_boundary: impl Fn(Complex<T>, Complex<T>) -> (Vec2<T>, Complex<T>),
) -> Result<Marched<T>> {
    let time = control.grid();
    let dt = time.dt();
    let last = time.n_steps();
    let mut field = Evolution::new();
    let mut boundary = Vec::with_capacity(time.len());
    let mut response = Vec::with_capacity(time.len());
    march(coef, bc, control.samples(), dt, |n, r, s| {
        let (b, resp) = at_boundary(r[0], s[0]);
        boundary.push(b);
        response.push(resp);
        if opts.recording.wants(n, last) {
            let frame = sigma_at_x
                .iter()
                .enumerate()
                .map(|(i, &sg)| {
                    let (ri, si) = sample_rs(r, s, sg, dt);
                    at_x(i, ri, si)
                })
                .collect();
            field.push(n, frame);
        }
    })?;
    Ok(Marched {
        field,
        boundary,
        response,
    })
}

/// Coefficients of the Dirac-type system on the travel-time grid.
struct DiracTypeSetup<T> {
    coef: Coefficients<T>,
    tau: Vec<T>,
    alpha: Vec<T>,
    beta: Vec<T>,
}

fn dirac_type_setup<T: Real>(red: &DiracReduction<T>, dt: T, sign: DiracSign) -> DiracTypeSetup<T> {
    let grid = red.grid();
    let h = grid.h();
    let tau = red.tau();
    let alpha: Vec<T> = red.d1().iter().map(|d| d.sqrt()).collect();
    let beta: Vec<T> = red.d2().iter().map(|d| d.sqrt()).collect();
    let ln_ab: Vec<T> = alpha.iter().zip(&beta).map(|(a, b)| (*a * *b).ln()).collect();
    let ln_ratio: Vec<T> = alpha.iter().zip(&beta).map(|(a, b)| (*a / *b).ln()).collect();
    let ln_ab_x = derivative(&ln_ab, h);
    let ln_ratio_x = derivative(&ln_ratio, h);
    let m = sigma_nodes(tau[tau.len() - 1], dt);
    let eps: T = sign.eps();
    let half = T::lit(0.5);
    let (mut a, mut b, mut c, mut d) = (
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
        Vec::with_capacity(m),
    );
    for j in 0..m {
        let sigma = T::count(j) * dt;
        let s = monotone_inverse(&tau, sigma).unwrap_or(T::count(grid.len() - 1));
        let d1 = cubic_at(red.d1(), s);
        let d2 = cubic_at(red.d2(), s);
        let psi = cubic_at(red.psi(), s);
        let ab = (d1 * d2).sqrt();
        // d/dsigma = (1 / sqrt(d1 d2)) d/dx
        let l1 = cubic_at(&ln_ab_x, s) / ab * half;
        let l2 = cubic_at(&ln_ratio_x, s) / ab * half;
        let sum = eps * psi * half * (T::one() / d1 + T::one() / d2);
        let diff = eps * psi * half * (T::one() / d1 - T::one() / d2);
        a.push(cplx(l1, sum));
        b.push(cplx(l2, diff));
        c.push(cplx(-l2, diff));
        d.push(cplx(-l1, sum));
    }
    DiracTypeSetup {
        coef: Coefficients { a, b, c, d },
        tau,
        alpha,
        beta,
    }
}

fn meta<T: Real>(
    system: &str,
    scheme: &str,
    cfl: T,
    space: &SpaceGrid<T>,
    control: &BoundaryControl<T>,
    hash: Option<u64>,
) -> SolverMeta {
    SolverMeta {
        system: system.into(),
        scheme: scheme.into(),
        cfl: cfl.as_f64(),
        x_max: Some(space.x_max().as_f64()),
        n_points: Some(space.len()),
        t_max: control.grid().t_max().as_f64(),
        n_steps: control.grid().n_steps(),
        hamiltonian_hash: hash,
        tail_mass: None,
        warnings: Vec::new(),
    }
}

const SCHEME: &str = "characteristics on travel-time grid, trapezoid coupling";

/// Dirac system `iu_t + Ju_x + Vu = 0`, `V = [[p, q], [q, -p]]`, with
/// `u_1(0, t) = f`; response `u_2(0, t)`.
pub fn solve_dirac<T: Real>(
    p: &[T],
    q: &[T],
    f: &BoundaryControl<T>,
    space: &SpaceGrid<T>,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    space.ensure_len(p.len(), "Dirac p")?;
    space.ensure_len(q.len(), "Dirac q")?;
    let time = *f.grid();
    let dt = time.dt();
    let cfl = check_cfl(dt, T::one(), space.h())?;
    check_truncation(space, T::one(), time.t_max())?;
    let m = sigma_nodes(space.x_max(), dt);
    let h = space.h();
    let mut coef = Coefficients {
        a: Vec::with_capacity(m),
        b: Vec::with_capacity(m),
        c: Vec::with_capacity(m),
        d: Vec::with_capacity(m),
    };
    for j in 0..m {
        let s = T::count(j) * dt / h;
        let (pj, qj) = (cubic_at(p, s), cubic_at(q, s));
        coef.a.push(cplx(T::zero(), T::zero()));
        coef.b.push(cplx(qj, pj));
        coef.c.push(cplx(-qj, pj));
        coef.d.push(cplx(T::zero(), T::zero()));
    }
    // r = u1 - i u2, s = u1 + i u2
    let bc = Boundary {
        kappa: cplx(T::lit(2.0), T::zero()),
        mu: cplx(-T::one(), T::zero()),
    };
    let half = T::lit(0.5);
    let i = cplx(T::zero(), T::one());
    let x: Vec<T> = space.points().collect();
    let conv = |r: Complex<T>, s: Complex<T>| [(r + s) * half, i * (r - s) * half];
    let out = run(&coef, &bc, f, &x, opts, |_, r, s| conv(r, s), |r, s| {
        let v = conv(r, s);
        (v, v[1])
    })?;
    Ok(EvolutionResult {
        space: Some(*space),
        time,
        field: FieldData::Vector(out.field),
        boundary: out.boundary,
        response: out.response,
        meta: meta("dirac", SCHEME, cfl, space, f, None),
    })
}

/// Dirac-type system with `v^1(0, t) = f`; response `v^2(0, t)`.
pub fn solve_dirac_type<T: Real>(
    red: &DiracReduction<T>,
    f: &BoundaryControl<T>,
    sign: DiracSign,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    let space = *red.grid();
    let time = *f.grid();
    let dt = time.dt();
    let speed = red.max_speed();
    let cfl = check_cfl(dt, speed, space.h())?;
    check_truncation(&space, speed, time.t_max())?;
    let setup = dirac_type_setup(red, dt, sign);
    let eps: T = sign.eps();
    let (alpha, beta) = (&setup.alpha, &setup.beta);
    let half = T::lit(0.5);
    let ie = cplx(T::zero(), eps);
    let conv = |k: usize, r: Complex<T>, s: Complex<T>| {
        [(r + s) * (half / alpha[k]), ie * (r - s) * (half / beta[k])]
    };
    let bc = Boundary {
        kappa: cplx(T::lit(2.0) * alpha[0], T::zero()),
        mu: cplx(-T::one(), T::zero()),
    };
    let out = run(&setup.coef, &bc, f, &setup.tau, opts, conv, |r, s| {
        let v = conv(0, r, s);
        (v, v[1])
    })?;
    let system = match sign {
        DiracSign::Forward => "dirac-type forward",
        DiracSign::Auxiliary => "dirac-type auxiliary",
    };
    Ok(EvolutionResult {
        space: Some(space),
        time,
        field: FieldData::Vector(out.field),
        boundary: out.boundary,
        response: out.response,
        meta: meta(system, SCHEME, cfl, &space, f, red.source().map(|h| h.content_hash())),
    })
}

/// First-order canonical system with a smooth strictly positive
/// Hamiltonian and `y^1(0, t) = f`; response `y^2(0, t)`.
///
/// `H` is diagonalized, `Y = R(phi) Y~`, and the resulting Dirac-type system
/// (auxiliary for [`Orientation::Standard`], forward for
/// [`Orientation::Reversed`], both with `psi = phi'`) is marched with the
/// rotated boundary condition `cos phi(0) y~^1 - sin phi(0) y~^2 = f`
/// imposed on the incoming characteristic.
pub fn solve_canonical_i<T: Real>(
    h: &HamiltonianField<T>,
    f: &BoundaryControl<T>,
    orientation: Orientation,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    let red = diagonalize_h(h)?;
    let space = *red.grid();
    let time = *f.grid();
    let dt = time.dt();
    let speed = red.max_speed();
    let cfl = check_cfl(dt, speed, space.h())?;
    check_truncation(&space, speed, time.t_max())?;
    let sign = match orientation {
        Orientation::Standard => DiracSign::Auxiliary,
        Orientation::Reversed => DiracSign::Forward,
    };
    let setup = dirac_type_setup(&red, dt, sign);
    let eps: T = sign.eps();
    let (alpha, beta, phi) = (&setup.alpha, &setup.beta, red.phi());
    let half = T::lit(0.5);
    let ie = cplx(T::zero(), eps);
    let rotated = |k: usize, r: Complex<T>, s: Complex<T>| {
        let y1 = (r + s) * (half / alpha[k]);
        let y2 = ie * (r - s) * (half / beta[k]);
        let (sn, cs) = phi[k].sin_cos();
        [y1 * cs - y2 * sn, y1 * sn + y2 * cs]
    };
    let (s0, c0) = phi[0].sin_cos();
    let k = cplx(c0 * half / alpha[0], -eps * s0 * half / beta[0]);
    let bc = Boundary {
        kappa: cplx(T::one(), T::zero()) / k,
        mu: -k.conj() / k,
    };
    let out = run(&setup.coef, &bc, f, &setup.tau, opts, rotated, |r, s| {
        let y = rotated(0, r, s);
        (y, y[1])
    })?;
    let system = match orientation {
        Orientation::Standard => "canonical iHY_t - JY_x = 0",
        Orientation::Reversed => "canonical iHZ_t + JZ_x = 0",
    };
    Ok(EvolutionResult {
        space: Some(space),
        time,
        field: FieldData::Vector(out.field),
        boundary: out.boundary,
        response: out.response,
        meta: meta(system, SCHEME, cfl, &space, f, Some(h.content_hash())),
    })
}
