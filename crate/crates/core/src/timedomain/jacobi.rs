//! Jacobi chains with continuous and discrete time, and the piecewise fields
//! of the equivalent rank-one canonical systems.

use num_complex::Complex;
use serde::Serialize;

use crate::builders::jacobi::dot;
use crate::builders::{JacobiMatrix, JacobiSystem};
use crate::error::{Error, Result};
use crate::field::{BoundaryControl, SpaceTime, Vec2};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::interp::derivative;
use crate::mat2::j_apply_r;
use crate::ode::midpoints;
use crate::scalar::{cplx, czero, Real};

use super::result::{EvolutionResult, FieldData, Recording, SolveOptions, SolverMeta};

/// Largest admissible `dt * |A|` for the continuous-time solver.
pub const JACOBI_STEP_BOUND: f64 = 0.5;

/// Meaning of the discrete time derivative `d_t v = v_t ± v_{t-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscreteDt {
    /// `v_t + v_{t-1}`, as printed.
    #[default]
    Sum,
    /// `v_t - v_{t-1}`.
    Difference,
}

impl DiscreteDt {
    fn sign<T: Real>(self) -> T {
        match self {
            DiscreteDt::Sum => T::one(),
            DiscreteDt::Difference => -T::one(),
        }
    }
}

/// Time dynamics of a Jacobi chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobiDynamics {
    /// `i v_t - A v = 0`.
    Continuous,
    /// `d_t v - A v = 0` on integer times.
    Discrete(DiscreteDt),
}

fn check_truncation<T: Real>(a: &JacobiMatrix<T>, n: usize) -> Result<()> {
    if n < 2 || n > a.dim() {
        return Err(Error::InvalidJacobi(format!(
            "truncation N = {n} outside 2..={}",
            a.dim()
        )));
    }
    Ok(())
}

/// Gershgorin bound of rows `2..=n` with `v_{n+1} = 0`.
fn truncated_norm<T: Real>(a: &JacobiMatrix<T>, n: usize) -> T {
    (2..=n)
        .map(|m| {
            let right = if m < n { a.rho(m).abs() } else { T::zero() };
            a.q(m).abs() + a.rho(m - 1).abs() + right
        })
        .fold(T::zero(), T::max)
}

/// `(A v)_m` for `m >= 2` with `v[0] = v_1` and `v_{n+1} = 0`.
#[inline]
fn row<T: Real>(a: &JacobiMatrix<T>, m: usize, v: &[Complex<T>]) -> Complex<T> {
    let next = if m < v.len() { v[m] * a.rho(m) } else { czero() };
    v[m - 2] * a.rho(m - 1) + v[m - 1] * a.q(m) + next
}

fn meta<T: Real>(system: &str, scheme: &str, cfl: T, n: usize, time: &TimeGrid<T>) -> SolverMeta {
    SolverMeta {
        system: system.into(),
        scheme: scheme.into(),
        cfl: cfl.as_f64(),
        x_max: None,
        n_points: Some(n),
        t_max: time.t_max().as_f64(),
        n_steps: time.n_steps(),
        hamiltonian_hash: None,
        tail_mass: None,
        warnings: Vec::new(),
    }
}

fn finish_tail<T: Real>(meta: &mut SolverMeta, tail: T, peak: T) {
    meta.tail_mass = Some(tail.as_f64());
    if tail > T::tol(1e-8) * peak.max(T::one()) {
        meta.warnings.push(format!(
            "tail mass |v_N| = {:e} exceeds 1e-8 of the peak; increase N",
            tail.as_f64()
        ));
    }
}

/// `i v_t - A v = 0`, `v_1 = h`, zero data, truncated at `v_{N+1} = 0`;
/// RK4 in time. Response `v_2(t)`. The field stores `v_1..v_N`.
pub fn solve_jacobi_continuous<T: Real>(
    a: &impl AsRef<JacobiMatrix<T>>,
    h: &BoundaryControl<T>,
    n: usize,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    let a = a.as_ref();
    check_truncation(a, n)?;
    let time = *h.grid();
    let dt = time.dt();
    let norm = truncated_norm(a, n);
    let courant = dt * norm;
    if courant > T::lit(JACOBI_STEP_BOUND) {
        return Err(Error::Cfl {
            dt: dt.as_f64(),
            bound: (T::lit(JACOBI_STEP_BOUND) / norm).as_f64(),
        });
    }
    let hs = h.samples();
    let hmid = midpoints::<T, Complex<T>>(hs);
    let mi = cplx(T::zero(), -T::one());
    // v[0] = v_1 is the boundary value, the rest evolve
    let rhs = |v: &[Complex<T>]| -> Vec<Complex<T>> {
        let mut out = vec![czero(); n];
        for m in 2..=n {
            out[m - 1] = mi * row(a, m, v);
        }
        out
    };
    let axpy = |v: &[Complex<T>], k: &[Complex<T>], s: T, b: Complex<T>| -> Vec<Complex<T>> {
        let mut w: Vec<Complex<T>> = v.iter().zip(k).map(|(x, y)| *x + *y * s).collect();
        w[0] = b;
        w
    };
    let last = time.n_steps();
    let mut v = vec![czero::<T>(); n];
    let mut field = SpaceTime::new();
    let mut boundary = Vec::with_capacity(time.len());
    let mut response = Vec::with_capacity(time.len());
    let (mut tail, mut peak) = (T::zero(), T::zero());
    let half = T::lit(0.5);
    for k in 0..=last {
        v[0] = hs[k];
        boundary.push([v[0], v[1]]);
        response.push(v[1]);
        tail = tail.max(v[n - 1].norm());
        peak = v.iter().fold(peak, |p, z| p.max(z.norm()));
        if opts.recording.wants(k, last) {
            field.push(k, v.clone());
        }
        if k == last {
            break;
        }
        let k1 = rhs(&v);
        let k2 = rhs(&axpy(&v, &k1, dt * half, hmid[k]));
        let k3 = rhs(&axpy(&v, &k2, dt * half, hmid[k]));
        let k4 = rhs(&axpy(&v, &k3, dt, hs[k + 1]));
        let sixth = dt / T::lit(6.0);
        for m in 1..n {
            v[m] = v[m] + (k1[m] + (k2[m] + k3[m]) * T::lit(2.0) + k4[m]) * sixth;
        }
    }
    let mut meta = meta("jacobi continuous time", "RK4, boundary site pinned", courant, n, &time);
    finish_tail(&mut meta, tail, peak);
    Ok(EvolutionResult {
        space: None,
        time,
        field: FieldData::Scalar(field),
        boundary,
        response,
        meta,
    })
}

/// `d_t v - A v = 0` on `t = 0..=steps`, with `v_{.,0} = v_{.,1} = 0` for
/// `n >= 2` and `v_{1,t} = h_t`; `h[0]` is `h_1`. Each step `t >= 2` solves
/// the tridiagonal rows `n = 2..N`. Response `v_{2,t}`.
pub fn solve_jacobi_discrete<T: Real>(
    a: &impl AsRef<JacobiMatrix<T>>,
    h: &[Complex<T>],
    n: usize,
    steps: usize,
    dt_mode: DiscreteDt,
    opts: &SolveOptions,
) -> Result<EvolutionResult<T>> {
    let a = a.as_ref();
    check_truncation(a, n)?;
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 time steps, got {steps}")));
    }
    let time = TimeGrid::with_step(T::one(), steps)?;
    let ht = |t: usize| if t >= 1 && t <= h.len() { h[t - 1] } else { czero() };
    let sign: T = dt_mode.sign();
    let mut v = vec![czero::<T>(); n];
    let mut field = SpaceTime::new();
    let mut boundary = Vec::with_capacity(steps + 1);
    let mut response = Vec::with_capacity(steps + 1);
    let (mut tail, mut peak) = (T::zero(), T::zero());
    // Thomas workspace over the unknowns v_2..v_N
    let m = n - 1;
    let mut cp = vec![czero::<T>(); m];
    let mut dp = vec![czero::<T>(); m];
    for t in 0..=steps {
        if t >= 2 {
            for i in 0..m {
                let row = i + 2;
                let lower = a.rho(row - 1);
                let diag = a.q(row) - T::one();
                let upper = if row < n { a.rho(row) } else { T::zero() };
                let mut rhs = v[row - 1] * sign;
                if i == 0 {
                    rhs = rhs - ht(t) * lower;
                }
                let denom = if i == 0 {
                    cplx(diag, T::zero())
                } else {
                    cplx(diag, T::zero()) - cp[i - 1] * lower
                };
                if denom.norm() <= T::epsilon() * (diag.abs() + lower.abs() + upper.abs()) {
                    return Err(Error::SingularSystem { step: t });
                }
                cp[i] = cplx(upper, T::zero()) / denom;
                dp[i] = if i == 0 { rhs / denom } else { (rhs - dp[i - 1] * lower) / denom };
            }
            v[m] = dp[m - 1];
            for i in (0..m - 1).rev() {
                v[i + 1] = dp[i] - cp[i] * v[i + 2];
            }
        }
        v[0] = ht(t);
        boundary.push([v[0], v[1]]);
        response.push(v[1]);
        tail = tail.max(v[n - 1].norm());
        peak = v.iter().fold(peak, |p, z| p.max(z.norm()));
        if opts.recording.wants(t, steps) {
            field.push(t, v.clone());
        }
    }
    let mode = match dt_mode {
        DiscreteDt::Sum => "d_t = v_t + v_{t-1}",
        DiscreteDt::Difference => "d_t = v_t - v_{t-1}",
    };
    let mut meta = meta(
        "jacobi discrete time",
        &format!("implicit tridiagonal step, {mode}"),
        T::one(),
        n,
        &time,
    );
    finish_tail(&mut meta, tail, peak);
    Ok(EvolutionResult {
        space: None,
        time,
        field: FieldData::Scalar(field),
        boundary,
        response,
        meta,
    })
}

/// Piecewise field `f = f_j e_j + xi_j(x) e_j^perp` on the first `N` cells
/// of a partition, `xi_j(x) = s_j + g_j (b_j - x)`, built from a Jacobi
/// chain solution.
#[derive(Debug, Clone)]
pub struct JacobiField<T> {
    sys: JacobiSystem<T>,
    time: TimeGrid<T>,
    steps: Vec<usize>,
    /// Per stored step: `(f_j, g_j, s_j)` for `j = 1..N`.
    coeffs: Vec<Vec<[Complex<T>; 3]>>,
    /// `u_1` per stored step.
    u1: Vec<Complex<T>>,
}

impl<T: Real> JacobiField<T> {
    pub fn system(&self) -> &JacobiSystem<T> {
        &self.sys
    }

    pub fn time(&self) -> &TimeGrid<T> {
        &self.time
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Number of assembled cells `N`.
    pub fn n_cells(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.len())
    }

    /// Right end `b_N` of the assembled cells.
    pub fn extent(&self) -> T {
        self.sys.breaks()[self.n_cells()]
    }

    /// `u_1` at every stored step (`i h'` or `h_t ± h_{t-1}`).
    pub fn u1(&self) -> &[Complex<T>] {
        &self.u1
    }

    fn cell_value(&self, frame: usize, j: usize, x: T) -> Vec2<T> {
        let [fj, gj, sj] = self.coeffs[frame][j - 1];
        let e = self.sys.e(j);
        let p = j_apply_r(e);
        let xi = sj + gj * (self.sys.breaks()[j] - x);
        [fj * e[0] + xi * p[0], fj * e[1] + xi * p[1]]
    }

    /// `f(x)` at stored frame `frame`; cells are closed on the left.
    pub fn value(&self, frame: usize, x: T) -> Vec2<T> {
        let b = self.sys.breaks();
        let n = self.n_cells();
        let j = b[1..=n].partition_point(|&bj| bj <= x).min(n - 1) + 1;
        self.cell_value(frame, j, x)
    }

    /// Largest jump `|f(b_j-) - f(b_j+)|` over `b_1..b_{N-1}` and the frames
    /// with time step `>= from_step`.
    pub fn continuity_defect(&self, from_step: usize) -> T {
        let n = self.n_cells();
        let mut worst = T::zero();
        for frame in (0..self.coeffs.len()).filter(|&k| self.steps[k] >= from_step) {
            for j in 1..n {
                let bj = self.sys.breaks()[j];
                let l = self.cell_value(frame, j, bj);
                let r = self.cell_value(frame, j + 1, bj);
                worst = worst.max(((l[0] - r[0]).norm_sqr() + (l[1] - r[1]).norm_sqr()).sqrt());
            }
        }
        worst
    }

    /// `f^2(0, t)` at every stored step.
    pub fn boundary_f2(&self) -> Vec<Complex<T>> {
        (0..self.coeffs.len()).map(|k| self.cell_value(k, 1, T::zero())[1]).collect()
    }

    /// Samples on a grid covering `[0, b_N]`, one frame per stored step.
    pub fn sample_on(&self, grid: &SpaceGrid<T>) -> Result<SpaceTime<Vec2<T>>> {
        if grid.x_max() > self.extent() * (T::one() + T::tol(1e-12)) {
            return Err(Error::GridMismatch(format!(
                "grid reaches {} beyond the assembled cells ending at {}",
                grid.x_max(),
                self.extent()
            )));
        }
        let mut out = SpaceTime::new();
        for (k, &step) in self.steps.iter().enumerate() {
            out.push(step, grid.points().map(|x| self.value(k, x)).collect());
        }
        Ok(out)
    }
}

/// Assembles the canonical-system field of a Jacobi chain solution.
///
/// `f_j = v_j / sqrt(l_j)` and `g_j = u_j / sqrt(l_j)`; for `n >= 2` the
/// chain equation gives `u_n = (A v)_n`, while `u_1` comes from the
/// dynamics (`i h'` by centered differences, or `h_t ± h_{t-1}`). The
/// constants follow from continuity at `b_j`:
/// `s_j = (f_{j+1} - f_j (e_{j+1}, e_j)) / (e_{j+1}, e_j^perp)`.
pub fn jacobi_fields_from_v<T: Real>(
    sys: &JacobiSystem<T>,
    v: &EvolutionResult<T>,
    dynamics: JacobiDynamics,
) -> Result<JacobiField<T>> {
    let data = v
        .field
        .as_scalar()
        .ok_or_else(|| Error::InvalidArgument("Jacobi fields need a scalar chain solution".into()))?;
    let time = v.time;
    if !data.is_complete(time.len()) {
        return Err(Error::Precondition("Jacobi fields need every time level recorded".into()));
    }
    let discrete = v.meta.system.contains("discrete");
    match dynamics {
        JacobiDynamics::Continuous if discrete => {
            return Err(Error::InvalidArgument("continuous dynamics for a discrete-time solution".into()))
        }
        JacobiDynamics::Discrete(_) if !discrete => {
            return Err(Error::InvalidArgument("discrete dynamics for a continuous-time solution".into()))
        }
        _ => {}
    }
    let frames = data.frames();
    let n = frames[0].len();
    if n + 1 > sys.n_cells() {
        return Err(Error::InvalidJacobi(format!(
            "chain of {n} sites needs {} cells, partition has {}",
            n + 1,
            sys.n_cells()
        )));
    }
    let a = sys.matrix();
    let v1: Vec<Complex<T>> = frames.iter().map(|f| f[0]).collect();
    let u1: Vec<Complex<T>> = match dynamics {
        JacobiDynamics::Continuous => {
            let i = cplx(T::zero(), T::one());
            derivative(&v1, time.dt()).into_iter().map(|d| i * d).collect()
        }
        JacobiDynamics::Discrete(mode) => {
            let sign: T = mode.sign();
            (0..v1.len())
                .map(|t| v1[t] + if t > 0 { v1[t - 1] * sign } else { czero() })
                .collect()
        }
    };
    let sq: Vec<T> = sys.lengths().iter().map(|l| l.sqrt()).collect();
    let coeffs = frames
        .iter()
        .enumerate()
        .map(|(t, vt)| {
            let u = |m: usize| -> Complex<T> {
                match (m, dynamics) {
                    (1, _) => u1[t],
                    (_, JacobiDynamics::Continuous) => row(a, m, vt),
                    (_, JacobiDynamics::Discrete(mode)) => {
                        let prev = if t > 0 { frames[t - 1][m - 1] } else { czero() };
                        vt[m - 1] + prev * mode.sign::<T>()
                    }
                }
            };
            let f = |m: usize| if m <= n { vt[m - 1] / sq[m - 1] } else { czero() };
            (1..=n)
                .map(|j| {
                    let (e, e1) = (sys.e(j), sys.e(j + 1));
                    let s = (f(j + 1) - f(j) * dot(e1, e)) / dot(e1, j_apply_r(e));
                    [f(j), u(j) / sq[j - 1], s]
                })
                .collect()
        })
        .collect();
    Ok(JacobiField {
        sys: sys.clone(),
        time,
        steps: data.steps().to_vec(),
        coeffs,
        u1,
    })
}

/// Boundary value `f^2(0, t)` as printed for the Jacobi canonical systems:
/// `-rho_1 v_2 sqrt(l_1) - h (1/sqrt(l_1) - i sqrt(l_1))`.
pub fn printed_boundary_relation<T: Real>(sys: &JacobiSystem<T>, v2: Complex<T>, h: Complex<T>) -> Complex<T> {
    let s1 = sys.l(1).sqrt();
    let rho1 = sys.matrix().rho(1);
    -(v2 * (rho1 * s1)) - h * cplx(T::one() / s1, -s1)
}

/// Boundary value `f^2(0, t)` obtained from the continuity conditions with
/// `e^perp = J e`:
/// `rho_1 sqrt(l_1) v_2 - rho_1 sqrt(l_2) (e_2, e_1) h - sqrt(l_1) u_1`.
pub fn boundary_relation<T: Real>(
    sys: &JacobiSystem<T>,
    v2: Complex<T>,
    h: Complex<T>,
    u1: Complex<T>,
) -> Complex<T> {
    let rho1 = sys.matrix().rho(1);
    let (s1, s2) = (sys.l(1).sqrt(), sys.l(2).sqrt());
    v2 * (rho1 * s1) - h * (rho1 * s2 * dot(sys.e(2), sys.e(1))) - u1 * s1
}

/// Records every level; the Jacobi field assembly needs them.
pub fn full_recording() -> SolveOptions {
    SolveOptions::recording(Recording::All)
}
