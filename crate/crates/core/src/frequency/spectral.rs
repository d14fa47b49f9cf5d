//! Dirichlet spectral solutions of the Dirac-type operator, Fourier images
//! of states, and the truncated `B(E)` scalar product.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{check_samples, DiracReduction, OVERFLOW};
use crate::error::{Error, Result};
use crate::field::{Snapshot, Vec2};
use crate::grid::SpaceGrid;
use crate::ode::{rk4_step, Sampled, State};
use crate::quadrature::Quadrature;
use crate::scalar::{cplx, czero, Real};

/// `(D, psi)` on a grid: `D = diag(d1, d2)`, `psi` scalar.
#[derive(Debug, Clone)]
pub struct SpectralCoefficients<T> {
    grid: SpaceGrid<T>,
    d1: Sampled<T>,
    d2: Sampled<T>,
    psi: Sampled<T>,
}

impl<T: Real> SpectralCoefficients<T> {
    pub fn new(grid: SpaceGrid<T>, d1: Vec<T>, d2: Vec<T>, psi: Vec<T>) -> Result<Self> {
        check_samples(&grid, &d1, "d1")?;
        check_samples(&grid, &d2, "d2")?;
        check_samples(&grid, &psi, "psi")?;
        Ok(Self {
            grid,
            d1: Sampled::new::<T>(d1),
            d2: Sampled::new::<T>(d2),
            psi: Sampled::new::<T>(psi),
        })
    }

    pub fn grid(&self) -> &SpaceGrid<T> {
        &self.grid
    }
}

impl<T: Real> From<&DiracReduction<T>> for SpectralCoefficients<T> {
    fn from(red: &DiracReduction<T>) -> Self {
        Self {
            grid: *red.grid(),
            d1: Sampled::new::<T>(red.d1().to_vec()),
            d2: Sampled::new::<T>(red.d2().to_vec()),
            psi: Sampled::new::<T>(red.psi().to_vec()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThetaSolution<T> {
    pub grid: SpaceGrid<T>,
    pub theta: Snapshot<T>,
    /// `max |det[phi theta] - 1|` against the companion solution with
    /// `phi(0) = (1, 0)`.
    pub det_defect: T,
}

/// Nodes `0..=k` with `x_k <= x_max`.
fn prefix<T: Real>(grid: &SpaceGrid<T>, x_max: T) -> Result<SpaceGrid<T>> {
    if !(x_max > T::zero()) {
        return Err(Error::InvalidArgument(format!("x_max = {x_max} must be positive")));
    }
    let k = ((x_max / grid.h()) * (T::one() + T::tol(1e-12))).floor().to_usize().unwrap_or(0);
    let k = k.min(grid.len() - 1);
    SpaceGrid::new(grid.x(k), k + 1)
}

/// Solves `J theta' + psi theta = z D theta`, `theta(0) = (0, 1)`, on the
/// nodes of the coefficient grid up to `x_max`.
pub fn solve_theta_dirichlet<T: Real>(coef: &SpectralCoefficients<T>, z: Complex<T>, x_max: T) -> Result<ThetaSolution<T>> {
    let grid = prefix(&coef.grid, x_max)?;
    let h = coef.grid.h();
    // theta' = -J (z D - psi) theta, J = [[0, 1], [-1, 0]]
    let rhs = |k: usize, stage, y: State<Complex<T>, 4>| {
        let (a, b, p) = (coef.d1.get(k, stage), coef.d2.get(k, stage), coef.psi.get(k, stage));
        let m = |v: [Complex<T>; 2]| {
            let w = [v[0] * z * a - v[0] * p, v[1] * z * b - v[1] * p];
            [-w[1], w[0]]
        };
        let [t1, t2, f1, f2] = y.0;
        let (dt, df) = (m([t1, t2]), m([f1, f2]));
        State([dt[0], dt[1], df[0], df[1]])
    };
    let (o, zc) = (cplx(T::one(), T::zero()), czero::<T>());
    let mut y = State([zc, o, o, zc]);
    let mut theta = Vec::with_capacity(grid.len());
    theta.push([zc, o]);
    let mut det_defect = T::zero();
    for k in 0..grid.len() - 1 {
        y = rk4_step(y, k, h, &rhs);
        let [t1, t2, f1, f2] = y.0;
        if y.0.iter().any(|v| !(v.norm() < T::lit(OVERFLOW))) {
            return Err(Error::Overflow { x: grid.x(k + 1).as_f64() });
        }
        det_defect = det_defect.max((f1 * t2 - f2 * t1 - o).norm());
        theta.push([t1, t2]);
    }
    Ok(ThetaSolution {
        grid,
        theta: Snapshot::from_values(theta),
        det_defect,
    })
}

/// `F(lambda) = int (f_1 theta_1 + f_2 theta_2) dx` by the trapezoid rule,
/// the state being sampled on the leading nodes of the coefficient grid.
pub fn fourier_image<T: Real>(state: &Snapshot<T>, coef: &SpectralCoefficients<T>, lambdas: &[T]) -> Result<Vec<Complex<T>>> {
    let n = state.len();
    if n < 2 || n > coef.grid.len() {
        return Err(Error::GridMismatch(format!(
            "state has {n} samples, coefficient grid has {}",
            coef.grid.len()
        )));
    }
    let x_max = coef.grid.x(n - 1);
    let w = Quadrature::Trapezoid.weights(n, coef.grid.h());
    lambdas
        .par_iter()
        .map(|&l| {
            let th = solve_theta_dirichlet(coef, cplx(l, T::zero()), x_max)?;
            Ok(state
                .values()
                .iter()
                .zip(th.theta.values())
                .zip(&w)
                .fold(czero(), |acc, ((f, t), &w): ((&Vec2<T>, &Vec2<T>), &T)| {
                    acc + (f[0] * t[0] + f[1] * t[1]) * w
                }))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProduct {
    pub value: [f64; 2],
    /// Estimate of the part of the real line outside the grid, assuming the
    /// integrand decays like `lambda^-2` beyond each end.
    pub tail_estimate: f64,
}

impl InnerProduct {
    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.value[0], self.value[1])
    }
}

/// `(1/pi) int conj(F) G / |E|^2 dlambda` on a uniform real grid, trapezoid
/// weights, with a tail estimate.
pub fn debranges_inner<T: Real>(f: &[Complex<T>], g: &[Complex<T>], e: &[Complex<T>], lambdas: &[T]) -> Result<InnerProduct> {
    let n = lambdas.len();
    if f.len() != n || g.len() != n || e.len() != n || n < 2 {
        return Err(Error::GridMismatch(format!(
            "samples {}, {}, {} on a grid of {n}",
            f.len(),
            g.len(),
            e.len()
        )));
    }
    let dl = lambdas[1] - lambdas[0];
    if !(dl > T::zero()) || lambdas.windows(2).any(|w| ((w[1] - w[0]) - dl).abs() > dl * T::tol(1e-6)) {
        return Err(Error::InvalidArgument("lambda grid must be uniform and increasing".into()));
    }
    let floor = T::lit(1e-300).max(T::min_positive_value());
    if let Some(k) = e.iter().position(|v| !(v.norm_sqr() > floor)) {
        return Err(Error::Precondition(format!("E vanishes at lambda = {}", lambdas[k])));
    }
    let integrand: Vec<Complex<T>> = (0..n).map(|k| f[k].conj() * g[k] / e[k].norm_sqr()).collect();
    let w = Quadrature::Trapezoid.weights(n, dl);
    let sum = integrand.iter().zip(&w).fold(czero::<T>(), |acc, (v, &w)| acc + v * w);
    let pi = T::PI();
    let value = sum / pi;
    let tail = (integrand[0].norm() * lambdas[0].abs() + integrand[n - 1].norm() * lambdas[n - 1].abs()) / pi;
    Ok(InnerProduct {
        value: [value.re.as_f64(), value.im.as_f64()],
        tail_estimate: tail.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(x_max: f64, n: usize) -> SpectralCoefficients<f64> {
        let g = SpaceGrid::new(x_max, n).unwrap();
        SpectralCoefficients::new(g, vec![0.5; n], vec![0.5; n], vec![0.0; n]).unwrap()
    }

    #[test]
    fn free_theta_is_rotation() {
        let c = free(2.0, 401);
        let z = Complex::new(3.0, 0.4);
        let s = solve_theta_dirichlet(&c, z, 2.0).unwrap();
        for (i, t) in s.theta.values().iter().enumerate() {
            let x = s.grid.x(i);
            assert!((t[0] + (z * x / 2.0).sin()).norm() < 1e-9);
            assert!((t[1] - (z * x / 2.0).cos()).norm() < 1e-9);
        }
        assert!(s.det_defect < 1e-9);
    }

    #[test]
    fn zero_frequency_is_constant() {
        let s = solve_theta_dirichlet(&free(1.0, 51), Complex::new(0.0, 0.0), 1.0).unwrap();
        assert!(s.theta.values().iter().all(|t| t[0] == Complex::new(0.0, 0.0) && t[1] == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn real_problem_stays_real() {
        let g = SpaceGrid::new(1.0, 101).unwrap();
        let c = SpectralCoefficients::new(g, g.sample(|x: f64| 0.6 + 0.1 * x), g.sample(|x: f64| 0.4 - 0.1 * x), g.sample(|x: f64| x.cos()))
            .unwrap();
        let s = solve_theta_dirichlet(&c, Complex::new(2.5, 0.0), 1.0).unwrap();
        assert!(s.theta.values().iter().all(|t| t[0].im.abs() < 1e-12 && t[1].im.abs() < 1e-12));
    }

    #[test]
    fn fourier_image_of_constant_state() {
        let c = free(1.0, 2001);
        let state = Snapshot::from_values(vec![[Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]; 2001]);
        let ls = [0.5, 1.0, 3.0, 7.0];
        let f = fourier_image(&state, &c, &ls).unwrap();
        for (l, v) in ls.iter().zip(&f) {
            assert!((v - 2.0 * (l / 2.0).sin() / l).norm() < 1e-7, "{l}");
        }
    }

    #[test]
    fn inner_product_tail_and_errors() {
        let ls: Vec<f64> = (0..=100).map(|k| -5.0 + 0.1 * k as f64).collect();
        let one = vec![Complex::new(1.0, 0.0); ls.len()];
        let zero = vec![Complex::new(0.0, 0.0); ls.len()];
        let r = debranges_inner(&one, &zero, &one, &ls).unwrap();
        assert_eq!(r.value(), Complex::new(0.0, 0.0));
        assert!(debranges_inner(&one, &one, &zero, &ls).is_err());
        let r = debranges_inner(&one, &one, &one, &ls).unwrap();
        assert!((r.value().re - 10.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(r.tail_estimate > 0.0);
    }
}
