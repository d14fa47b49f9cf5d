//! Quadrature on uniform grids.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Snapshot;
use crate::grid::SpaceGrid;
use crate::scalar::{czero, Real};

/// Quadrature rule on a uniform grid. Trapezoid is the default everywhere;
/// Simpson is used only where a caller asks for it (falls back to trapezoid
/// on the last cell when the number of cells is odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Quadrature {
    #[default]
    Trapezoid,
    Simpson,
}

impl Quadrature {
    /// Weights for `n` equally spaced samples with spacing `h`.
    pub fn weights<T: Real>(self, n: usize, h: T) -> Vec<T> {
        assert!(n >= 2, "quadrature needs at least two samples");
        let half = T::lit(0.5);
        match self {
            Quadrature::Trapezoid => {
                let mut w = vec![h; n];
                w[0] = h * half;
                w[n - 1] = h * half;
                w
            }
            Quadrature::Simpson => {
                let cells = n - 1;
                let even = cells - cells % 2;
                let mut w = vec![T::zero(); n];
                let third = h / T::lit(3.0);
                let mut k = 0;
                while k < even {
                    w[k] += third;
                    w[k + 1] += T::lit(4.0) * third;
                    w[k + 2] += third;
                    k += 2;
                }
                if even < cells {
                    w[cells - 1] += h * half;
                    w[cells] += h * half;
                }
                w
            }
        }
    }
}

/// Trapezoid integral of real samples with spacing `h`.
pub fn trapezoid<T: Real>(values: &[T], h: T) -> T {
    Quadrature::Trapezoid
        .weights(values.len(), h)
        .iter()
        .zip(values)
        .map(|(&w, &v)| w * v)
        .sum()
}

/// Trapezoid integral of complex samples with spacing `h`.
pub fn trapezoid_c<T: Real>(values: &[Complex<T>], h: T) -> Complex<T> {
    let n = values.len();
    if n < 2 {
        return czero();
    }
    let half = T::lit(0.5);
    let inner: Complex<T> = values[1..n - 1].iter().fold(czero(), |acc, &v| acc + v);
    (inner + (values[0] + values[n - 1]) * half) * h
}

/// Running trapezoid integral `F_i = ∫_0^{x_i} f`, `F_0 = 0`.
pub fn cumulative_trapezoid<T: Real>(values: &[T], h: T) -> Vec<T> {
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(values.len());
    let mut acc = T::zero();
    out.push(acc);
    for w in values.windows(2) {
        acc += (w[0] + w[1]) * half * h;
        out.push(acc);
    }
    out
}

/// Discrete `L2(0, x_max; C^2)` pairing `∫ conj(a)·b dx`, conjugate-linear in `a`.
pub fn quad_inner<T: Real>(a: &Snapshot<T>, b: &Snapshot<T>, grid: &SpaceGrid<T>) -> Result<Complex<T>> {
    quad_inner_with(a, b, grid, Quadrature::Trapezoid)
}

pub fn quad_inner_with<T: Real>(
    a: &Snapshot<T>,
    b: &Snapshot<T>,
    grid: &SpaceGrid<T>,
    rule: Quadrature,
) -> Result<Complex<T>> {
    grid.ensure_len(a.len(), "first snapshot")?;
    grid.ensure_len(b.len(), "second snapshot")?;
    if a.len() != b.len() {
        return Err(Error::GridMismatch("snapshots differ in length".into()));
    }
    let w = rule.weights(grid.len(), grid.h());
    Ok(a
        .values()
        .iter()
        .zip(b.values())
        .zip(&w)
        .fold(czero(), |acc, ((u, v), &wk)| {
            acc + (u[0].conj() * v[0] + u[1].conj() * v[1]) * wk
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    fn snap(grid: &SpaceGrid<f64>, f: impl Fn(f64) -> [f64; 2]) -> Snapshot<f64> {
        Snapshot::from_values(
            grid.points()
                .map(|x| {
                    let v = f(x);
                    [creal(v[0]), creal(v[1])]
                })
                .collect(),
        )
    }

    #[test]
    fn unit_constant() {
        let g = SpaceGrid::new(1.0, 11).unwrap();
        let a = snap(&g, |_| [1.0, 0.0]);
        let v = quad_inner(&a, &a, &g).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn orthogonal_components() {
        let g = SpaceGrid::new(1.0, 11).unwrap();
        let a = snap(&g, |_| [1.0, 0.0]);
        let b = snap(&g, |_| [0.0, 1.0]);
        assert_eq!(quad_inner(&a, &b, &g).unwrap().norm(), 0.0);
    }

    #[test]
    fn square_of_identity_integrates_to_a_third() {
        let g = SpaceGrid::new(1.0, 1001).unwrap();
        let a = snap(&g, |x| [x, 0.0]);
        let v = quad_inner(&a, &a, &g).unwrap();
        // trapezoid error h^2/6 = 1.7e-7
        assert!((v.re - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn conjugate_linear_in_first_argument() {
        let g = SpaceGrid::new(1.0, 21).unwrap();
        let a = snap(&g, |x| [x, 1.0 - x]);
        let b = snap(&g, |x| [x * x, 2.0]);
        let i = Complex::new(0.0, 1.0);
        let ia = a.scaled(i);
        let lhs = quad_inner(&ia, &b, &g).unwrap();
        let rhs = quad_inner(&a, &b, &g).unwrap() * i.conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn mismatched_grid_rejected() {
        let g = SpaceGrid::new(1.0, 11).unwrap();
        let g2 = SpaceGrid::new(1.0, 12).unwrap();
        let a = snap(&g, |_| [1.0, 0.0]);
        let b = snap(&g2, |_| [1.0, 0.0]);
        assert!(matches!(quad_inner(&a, &b, &g), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let w = Quadrature::Simpson.weights(11, 0.1_f64);
        let v: f64 = (0..11).map(|i| (i as f64 * 0.1).powi(3) * w[i]).sum();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn generic_over_f32() {
        let g = SpaceGrid::new(1.0_f32, 101).unwrap();
        let vals: Vec<f32> = g.points().collect();
        assert!((trapezoid(&vals, g.h()) - 0.5).abs() < 1e-6);
    }
}
