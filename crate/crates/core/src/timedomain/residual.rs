//! Discrete residuals of canonical-system equations on sampled fields.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{SpaceTime, Vec2};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::hamiltonian::HamiltonianField;
use crate::interp::derivative;
use crate::mat2::{j_apply, Sym2};
use crate::scalar::{cplx, Real};

use super::jacobi::DiscreteDt;

/// Which equation the residual evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualMode {
    /// `H C_tt - J C_x`.
    SecondOrder,
    /// `i H C_t - J C_x`.
    FirstOrderI,
    /// `i H C_t + J C_x`.
    FirstOrderIReversed,
    /// `H (f_t ± f_{t-1}) - J f_x` on integer time levels.
    Discrete(DiscreteDt),
    /// `det H Y_tt - Y_xx + det H H^{-1} J (H^{-1})_x J Y_x`.
    OneVelocity,
}

/// Options for [`canonical_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualOptions<T> {
    /// Travel time `tau(x)` at the grid nodes. `None` uses the eikonal of
    /// `H`; rank-one fields have `tau = 0` and nothing is excluded.
    pub front: Option<Vec<T>>,
    /// Start of the control support; the front sits at `t = tau(x) + shift`.
    pub shift: T,
    /// Points with `|tau(x) - (t - shift)| <= width * max(h, dt)` are skipped.
    pub width: T,
    /// Relative residual above which the report is flagged.
    pub flag_above: T,
}

impl<T: Real> Default for ResidualOptions<T> {
    fn default() -> Self {
        Self {
            front: None,
            shift: T::zero(),
            width: T::lit(2.0),
            flag_above: T::lit(0.05),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub mode: ResidualMode,
    /// Discrete `L2(space x time)` norm of the residual.
    pub l2: f64,
    pub max: f64,
    /// `l2` over the largest `L2` norm of the individual terms.
    pub relative: f64,
    pub flagged: bool,
    pub h: f64,
    pub dt: f64,
    pub n_points: usize,
    pub n_excluded: usize,
    /// `log2(e_coarse / e_fine)` of the `l2` norms, when several grids were
    /// compared.
    pub slope: Option<f64>,
}

/// `log2(e[k-1] / e[k])` for the last two entries.
pub fn convergence_slope(errors: &[f64]) -> Option<f64> {
    match errors {
        [.., a, b] if *a > 0.0 && *b > 0.0 => Some((a / b).log2()),
        _ => None,
    }
}

/// Attaches the convergence slope of the `l2` norms to the finest report.
pub fn with_slope(reports: &[ResidualReport]) -> Option<ResidualReport> {
    let last = reports.last()?.clone();
    let e: Vec<f64> = reports.iter().map(|r| r.l2).collect();
    Some(ResidualReport {
        slope: convergence_slope(&e),
        ..last
    })
}

#[inline]
fn sym_c<T: Real>(m: &Sym2<T>, v: Vec2<T>) -> Vec2<T> {
    m.apply_c(v)
}

#[inline]
fn norm2<T: Real>(v: Vec2<T>) -> T {
    v[0].norm_sqr() + v[1].norm_sqr()
}

/// Whether the three-point stencil around `x` crosses a break of a
/// piecewise Hamiltonian.
fn straddles<T: Real>(breaks: &[T], x0: T, x1: T) -> bool {
    breaks.iter().any(|&b| b > x0 && b < x1)
}

/// Evaluates the tagged equation by centered differences at interior nodes
/// and interior time levels (every level must be recorded).
pub fn canonical_residual<T: Real>(
    h: &HamiltonianField<T>,
    field: &SpaceTime<Vec2<T>>,
    space: &SpaceGrid<T>,
    time: &TimeGrid<T>,
    mode: ResidualMode,
    opts: &ResidualOptions<T>,
) -> Result<ResidualReport> {
    if !field.is_complete(time.len()) {
        return Err(Error::GridMismatch(format!(
            "field has {} levels, time grid {}",
            field.len(),
            time.len()
        )));
    }
    let frames = field.frames();
    if let Some(f) = frames.iter().find(|f| f.len() != space.len()) {
        return Err(Error::GridMismatch(format!(
            "frame has {} points, grid {}",
            f.len(),
            space.len()
        )));
    }
    if h.extent() < space.x_max() * (T::one() - T::tol(1e-12)) {
        return Err(Error::GridMismatch(format!(
            "Hamiltonian ends at {} before the grid end {}",
            h.extent(),
            space.x_max()
        )));
    }
    let n = space.len();
    let (dx, dt) = (space.h(), time.dt());
    let hs = h.sample_on(space);
    let tau = match &opts.front {
        Some(t) => {
            space.ensure_len(t.len(), "front")?;
            t.clone()
        }
        None => {
            let det: Vec<T> = hs.iter().map(|m| m.det().max(T::zero()).sqrt()).collect();
            crate::quadrature::cumulative_trapezoid(&det, dx)
        }
    };
    let breaks: Vec<T> = h.partition().map(|(b, _)| b.to_vec()).unwrap_or_default();
    // pieces needed by the one-velocity mode
    let (dets, corr) = if mode == ResidualMode::OneVelocity {
        let inv: Vec<Sym2<T>> = hs
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.inverse().ok_or(Error::SingularCoefficient {
                    x: space.x(i).as_f64(),
                })
            })
            .collect::<Result<_>>()?;
        let dinv = derivative(&inv, dx);
        // det H * H^{-1} J (H^{-1})_x J as a general 2x2 matrix
        let corr: Vec<[[T; 2]; 2]> = (0..n)
            .map(|i| {
                let d = dinv[i];
                let jd = [[d.b, d.c], [-d.a, -d.b]];
                let jdj = [[-jd[0][1], jd[0][0]], [-jd[1][1], jd[1][0]]];
                let hi = inv[i];
                let s = hs[i].det();
                let m = |r: usize, c: usize| {
                    let row = [[hi.a, hi.b], [hi.b, hi.c]][r];
                    s * (row[0] * jdj[0][c] + row[1] * jdj[1][c])
                };
                [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]]
            })
            .collect();
        (hs.iter().map(|m| m.det()).collect::<Vec<T>>(), corr)
    } else {
        (Vec::new(), Vec::new())
    };
    let margin = opts.width * dx.max(dt);
    let i = cplx(T::zero(), T::one());
    let two = T::lit(2.0);
    let (mut sum, mut max, mut n_points, mut n_excluded) = (T::zero(), T::zero(), 0usize, 0usize);
    let mut term_a = T::zero();
    let mut term_b = T::zero();
    let k_range = match mode {
        ResidualMode::Discrete(_) => 1..frames.len(),
        _ => 1..frames.len() - 1,
    };
    for k in k_range {
        let t = time.t(k);
        for x in 1..n - 1 {
            let (x0, x1) = (space.x(x - 1), space.x(x + 1));
            if !breaks.is_empty() && straddles(&breaks, x0, x1) {
                n_excluded += 1;
                continue;
            }
            if (tau[x] - (t - opts.shift)).abs() <= margin && tau[x] > T::zero() {
                n_excluded += 1;
                continue;
            }
            let c = |kk: usize, xx: usize| frames[kk][xx];
            let cx: Vec2<T> = [
                (c(k, x + 1)[0] - c(k, x - 1)[0]) / (two * dx),
                (c(k, x + 1)[1] - c(k, x - 1)[1]) / (two * dx),
            ];
            let jcx = j_apply(cx);
            let m = &hs[x];
            let (a, b): (Vec2<T>, Vec2<T>) = match mode {
                ResidualMode::SecondOrder => {
                    let ctt = |p: usize| (c(k + 1, x)[p] - c(k, x)[p] * two + c(k - 1, x)[p]) / (dt * dt);
                    (sym_c(m, [ctt(0), ctt(1)]), [-jcx[0], -jcx[1]])
                }
                ResidualMode::FirstOrderI | ResidualMode::FirstOrderIReversed => {
                    let ct = |p: usize| (c(k + 1, x)[p] - c(k - 1, x)[p]) / (two * dt);
                    let hct = sym_c(m, [ct(0), ct(1)]);
                    let s = if mode == ResidualMode::FirstOrderI { -T::one() } else { T::one() };
                    ([i * hct[0], i * hct[1]], [jcx[0] * s, jcx[1] * s])
                }
                ResidualMode::Discrete(dmode) => {
                    let sg = match dmode {
                        DiscreteDt::Sum => T::one(),
                        DiscreteDt::Difference => -T::one(),
                    };
                    let d = |p: usize| c(k, x)[p] + c(k - 1, x)[p] * sg;
                    (sym_c(m, [d(0), d(1)]), [-jcx[0], -jcx[1]])
                }
                ResidualMode::OneVelocity => {
                    let ctt = |p: usize| (c(k + 1, x)[p] - c(k, x)[p] * two + c(k - 1, x)[p]) / (dt * dt);
                    let cxx = |p: usize| (c(k, x + 1)[p] - c(k, x)[p] * two + c(k, x - 1)[p]) / (dx * dx);
                    let q = &corr[x];
                    let lower = [
                        cx[0] * q[0][0] + cx[1] * q[0][1],
                        cx[0] * q[1][0] + cx[1] * q[1][1],
                    ];
                    (
                        [ctt(0) * dets[x], ctt(1) * dets[x]],
                        [lower[0] - cxx(0), lower[1] - cxx(1)],
                    )
                }
            };
            let r = [a[0] + b[0], a[1] + b[1]];
            let rn = norm2(r);
            sum += rn;
            max = max.max(rn.sqrt());
            term_a += norm2(a);
            term_b += norm2(b);
            n_points += 1;
        }
    }
    let w = dx * dt;
    let l2 = (sum * w).sqrt();
    let scale = (term_a.max(term_b) * w).sqrt();
    let relative = if scale > T::zero() { l2 / scale } else { T::zero() };
    Ok(ResidualReport {
        mode,
        l2: l2.as_f64(),
        max: max.as_f64(),
        relative: relative.as_f64(),
        flagged: relative > opts.flag_above,
        h: dx.as_f64(),
        dt: dt.as_f64(),
        n_points,
        n_excluded,
        slope: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    /// `u = f(t - x)` mapped to `(c^1, c^2) = (f + x f', -f')` at `t - x`,
    /// with `f = sin 3s`.
    fn free_exact(space: &SpaceGrid<f64>, time: &TimeGrid<f64>) -> SpaceTime<Vec2<f64>> {
        let mut out = SpaceTime::new();
        for (k, t) in time.times().enumerate() {
            out.push(
                k,
                space
                    .points()
                    .map(|x| {
                        let s = t - x;
                        let (f, fp) = ((3.0 * s).sin(), 3.0 * (3.0 * s).cos());
                        [Complex::new(f + x * fp, 0.0), Complex::new(-fp, 0.0)]
                    })
                    .collect(),
            );
        }
        out
    }

    fn free_h(space: &SpaceGrid<f64>) -> HamiltonianField<f64> {
        HamiltonianField::sampled(*space, space.points().map(|x| Sym2::new(1.0, x, x * x)).collect(), None).unwrap()
    }

    fn residual_at(n: usize) -> ResidualReport {
        let space = SpaceGrid::new(1.0, n + 1).unwrap();
        let time = TimeGrid::new(1.0, n).unwrap();
        let c = free_exact(&space, &time);
        canonical_residual(&free_h(&space), &c, &space, &time, ResidualMode::SecondOrder, &ResidualOptions::default())
            .unwrap()
    }

    #[test]
    fn exact_free_field_converges_at_second_order() {
        let r = with_slope(&[residual_at(50), residual_at(100)]).unwrap();
        assert!(r.slope.unwrap() > 1.9, "{r:?}");
        assert!(!r.flagged);
    }

    #[test]
    fn zero_field_has_zero_residual() {
        let space = SpaceGrid::new(1.0, 21).unwrap();
        let time = TimeGrid::new(1.0, 20).unwrap();
        let mut z = SpaceTime::new();
        for k in 0..=20 {
            z.push(k, vec![[Complex::new(0.0, 0.0); 2]; 21]);
        }
        let r = canonical_residual(&free_h(&space), &z, &space, &time, ResidualMode::SecondOrder, &ResidualOptions::default())
            .unwrap();
        assert_eq!(r.l2, 0.0);
    }

    #[test]
    fn mismatched_hamiltonian_is_flagged() {
        let space = SpaceGrid::new(1.0, 101).unwrap();
        let time = TimeGrid::new(1.0, 100).unwrap();
        let c = free_exact(&space, &time);
        let wrong = HamiltonianField::sampled(
            space,
            space.points().map(|x| Sym2::new(1.0, 2.0 * x, 4.0 * x * x)).collect(),
            None,
        )
        .unwrap();
        let r = canonical_residual(&wrong, &c, &space, &time, ResidualMode::SecondOrder, &ResidualOptions::default())
            .unwrap();
        assert!(r.flagged && r.relative > 0.1, "{r:?}");
    }
}
