//! Transfer solutions of the spectral canonical system `-JY' = lambda H Y`.

use num_complex::Complex;

use crate::builders::OVERFLOW;
use crate::error::{Error, Result};
use crate::field::Vec2;
use crate::grid::SpaceGrid;
use crate::hamiltonian::HamiltonianField;
use crate::mat2::{j_apply, CMat2, Sym2};
use crate::ode::{rk4_step, Sampled, Stage, State};
use crate::scalar::{cplx, Real};

#[derive(Debug, Clone)]
enum Kind<T> {
    Sampled { grid: SpaceGrid<T>, h: Sampled<Sym2<T>> },
    Piecewise { breaks: Vec<T>, vectors: Vec<[T; 2]> },
}

/// Reusable integrator of `Y' = lambda J H Y` for one Hamiltonian.
///
/// Sampled Hamiltonians are marched by RK4 with the grid step (midpoint
/// values by four-point interpolation). On a piecewise rank-one Hamiltonian
/// `JH` is nilpotent on every interval, so the interval propagator is
/// exactly `I + lambda l J e e^T`.
#[derive(Debug, Clone)]
pub struct TransferSolver<T> {
    field: HamiltonianField<T>,
    kind: Kind<T>,
}

impl<T: Real> TransferSolver<T> {
    pub fn new(h: &HamiltonianField<T>) -> Self {
        let kind = match (h.partition(), h.grid(), h.samples()) {
            (Some((breaks, vectors)), _, _) => Kind::Piecewise {
                breaks: breaks.to_vec(),
                vectors: vectors.to_vec(),
            },
            (None, Some(grid), Some(samples)) => Kind::Sampled {
                grid: *grid,
                h: Sampled::new::<T>(samples.to_vec()),
            },
            _ => unreachable!("a Hamiltonian is either sampled or piecewise"),
        };
        Self { field: h.clone(), kind }
    }

    pub fn field(&self) -> &HamiltonianField<T> {
        &self.field
    }

    pub fn extent(&self) -> T {
        self.field.extent()
    }

    fn check_x(&self, x: T) -> Result<()> {
        let ext = self.extent();
        if !(x >= T::zero()) || x > ext * (T::one() + T::tol(1e-12)) {
            return Err(Error::InvalidArgument(format!("x = {x} outside [0, {ext}]")));
        }
        Ok(())
    }

    /// `Y(x, lambda)` with `Y(0) = c0`.
    pub fn solve(&self, x: T, lambda: Complex<T>, c0: Vec2<T>) -> Result<Vec2<T>> {
        self.check_x(x)?;
        match &self.kind {
            Kind::Piecewise { breaks, vectors } => Ok(piecewise(breaks, vectors, x, lambda, c0)),
            Kind::Sampled { grid, h } => self.sampled(grid, h, x, lambda, c0, |_, _| ()),
        }
    }

    /// `Y` at every grid node up to `x_max` (sampled Hamiltonians only).
    pub fn path(&self, lambda: Complex<T>, c0: Vec2<T>) -> Result<Vec<Vec2<T>>> {
        match &self.kind {
            Kind::Sampled { grid, h } => {
                let mut out = Vec::with_capacity(grid.len());
                self.sampled(grid, h, grid.x_max(), lambda, c0, |_, y| out.push(y))?;
                Ok(out)
            }
            Kind::Piecewise { .. } => Err(Error::InvalidArgument(
                "node path needs a sampled Hamiltonian".into(),
            )),
        }
    }

    fn sampled(
        &self,
        grid: &SpaceGrid<T>,
        h: &Sampled<Sym2<T>>,
        x: T,
        lambda: Complex<T>,
        c0: Vec2<T>,
        mut visit: impl FnMut(usize, Vec2<T>),
    ) -> Result<Vec2<T>> {
        let step = grid.h();
        let rhs = |hm: Sym2<T>, y: State<Complex<T>, 2>| State(j_apply(hm.apply_c(y.0)).map(|v| v * lambda));
        let f = |k: usize, stage: Stage, y: State<Complex<T>, 2>| rhs(h.get(k, stage), y);
        let full = ((x / step) * (T::one() + T::tol(1e-12))).floor().to_usize().unwrap_or(0);
        let full = full.min(grid.len() - 1);
        let mut y = State(c0);
        visit(0, y.0);
        for k in 0..full {
            y = rk4_step(y, k, step, &f);
            guard(&y.0, grid.x(k + 1))?;
            visit(k + 1, y.0);
        }
        let rest = x - grid.x(full);
        if rest > step * T::tol(1e-9) {
            // partial last step with interpolated coefficients
            let x0 = grid.x(full);
            let at = |s: T| self.field.at(x0 + s);
            let half = T::lit(0.5);
            let k1 = rhs(at(T::zero()), y);
            let k2 = rhs(at(rest * half), y + k1 * (rest * half));
            let k3 = rhs(at(rest * half), y + k2 * (rest * half));
            let k4 = rhs(at(rest), y + k3 * rest);
            y = y + (k1 + k2 * T::lit(2.0) + k3 * T::lit(2.0) + k4) * (rest / T::lit(6.0));
            guard(&y.0, x)?;
        }
        Ok(y.0)
    }

    /// Fundamental matrix with columns `Y(x)` for `Y(0) = (1, 0)` and
    /// `(0, 1)`.
    pub fn fundamental(&self, x: T, lambda: Complex<T>) -> Result<FundamentalMatrix<T>> {
        let (o, z) = (cplx(T::one(), T::zero()), cplx(T::zero(), T::zero()));
        let a = self.solve(x, lambda, [o, z])?;
        let b = self.solve(x, lambda, [z, o])?;
        let m = CMat2::new(a[0], b[0], a[1], b[1]);
        let det_defect = (m.det() - o).norm();
        Ok(FundamentalMatrix { m, det_defect })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix<T> {
    pub m: CMat2<T>,
    /// `|det - 1|`; the exact determinant is one because `tr(JH) = 0`.
    pub det_defect: T,
}

fn guard<T: Real>(y: &Vec2<T>, x: T) -> Result<()> {
    if y.iter().all(|v| v.norm() < T::lit(OVERFLOW)) {
        Ok(())
    } else {
        Err(Error::Overflow { x: x.as_f64() })
    }
}

fn piecewise<T: Real>(breaks: &[T], vectors: &[[T; 2]], x: T, lambda: Complex<T>, c0: Vec2<T>) -> Vec2<T> {
    let mut y = c0;
    for (j, e) in vectors.iter().enumerate() {
        let (a, b) = (breaks[j], breaks[j + 1]);
        if x <= a {
            break;
        }
        let l = b.min(x) - a;
        // (I + lambda l J e e^T) y
        let ey = y[0] * e[0] + y[1] * e[1];
        let je = j_apply([cplx(e[0], T::zero()), cplx(e[1], T::zero())]);
        y = [y[0] + je[0] * ey * lambda * l, y[1] + je[1] * ey * lambda * l];
    }
    y
}

/// `Y(x, lambda)` for `-JY' = lambda H Y`, `Y(0) = c0`.
pub fn solve_transfer<T: Real>(h: &HamiltonianField<T>, x: T, lambda: Complex<T>, c0: [T; 2]) -> Result<Vec2<T>> {
    let c = [cplx(c0[0], T::zero()), cplx(c0[1], T::zero())];
    TransferSolver::new(h).solve(x, lambda, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_identity(x_max: f64, n: usize) -> HamiltonianField<f64> {
        HamiltonianField::constant(SpaceGrid::new(x_max, n).unwrap(), Sym2::diag(0.5, 0.5)).unwrap()
    }

    #[test]
    fn half_identity_is_a_rotation() {
        let h = half_identity(3.0, 601);
        for (x, lam) in [(1.0, Complex::new(2.0, 0.0)), (2.5, Complex::new(-1.5, 0.7)), (0.731, Complex::new(4.0, -0.3))] {
            let y = solve_transfer(&h, x, lam, [1.0, 0.0]).unwrap();
            let th = lam * (x / 2.0);
            assert!((y[0] - th.cos()).norm() < 1e-9, "{x} {lam}");
            assert!((y[1] + th.sin()).norm() < 1e-9, "{x} {lam}");
        }
    }

    #[test]
    fn zero_frequency_is_constant() {
        let grid = SpaceGrid::new(1.0, 101).unwrap();
        let h = HamiltonianField::from_fn(grid, |x| Sym2::new(1.0 + x, 0.3 * x, 1.0)).unwrap();
        let y = solve_transfer(&h, 1.0, Complex::new(0.0, 0.0), [0.3, -2.0]).unwrap();
        assert_eq!(y, [Complex::new(0.3, 0.0), Complex::new(-2.0, 0.0)]);
    }

    #[test]
    fn determinant_is_one() {
        let grid = SpaceGrid::new(2.0, 401).unwrap();
        let h = HamiltonianField::from_fn(grid, |x: f64| {
            Sym2::from_eigen(0.7 + 0.1 * x.sin(), 0.3 - 0.1 * x.sin(), 0.4 * x)
        })
        .unwrap();
        let s = TransferSolver::new(&h);
        for lam in [Complex::new(3.0, 0.0), Complex::new(-2.0, 1.5), Complex::new(0.5, -4.0)] {
            assert!(s.fundamental(2.0, lam).unwrap().det_defect < 1e-9);
        }
    }

    #[test]
    fn piecewise_matches_fine_sampling() {
        // one interval with e = (cos a, sin a): H constant rank one
        let a = 0.6_f64;
        let e = [a.cos(), a.sin()];
        let pw = HamiltonianField::piecewise_rank1(&[1.5], &[e]).unwrap();
        let sampled = HamiltonianField::constant(SpaceGrid::new(1.5, 301).unwrap(), Sym2::outer(e)).unwrap();
        let lam = Complex::new(2.0, 0.5);
        let y1 = solve_transfer(&pw, 1.2, lam, [1.0, 0.0]).unwrap();
        let y2 = solve_transfer(&sampled, 1.2, lam, [1.0, 0.0]).unwrap();
        assert!((y1[0] - y2[0]).norm() + (y1[1] - y2[1]).norm() < 1e-12);
    }

    #[test]
    fn outside_extent_rejected() {
        let h = half_identity(1.0, 11);
        assert!(solve_transfer(&h, 1.5, Complex::new(1.0, 0.0), [1.0, 0.0]).is_err());
    }

    #[test]
    fn overflow_reported() {
        let h = half_identity(100.0, 2001);
        let err = solve_transfer(&h, 100.0, Complex::new(0.0, 20.0), [1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }
}
