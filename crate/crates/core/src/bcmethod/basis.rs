//! Orthonormalized smoothed-delta control bases.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::BoundaryControl;
use crate::grid::TimeGrid;
use crate::quadrature::Quadrature;
use crate::scalar::{czero, Real};
use crate::timedomain::{basis_controls, bump_centers, BUMP_STEPS};

/// Controls `q_j` orthonormal in the trapezoid `L2(0, T)` product, spanning
/// the smoothed deltas centered every `stride` steps with half-width
/// `6 dt`. `q_j` only involves bumps `0..=j`.
#[derive(Debug, Clone, Serialize)]
pub struct ControlBasis<T> {
    #[serde(skip)]
    time: TimeGrid<T>,
    centers: Vec<T>,
    width: T,
    #[serde(skip)]
    controls: Vec<BoundaryControl<T>>,
}

/// Relative norm below which a Gram–Schmidt remainder counts as dependent.
const DEPENDENT: f64 = 1e-10;

impl<T: Real> ControlBasis<T> {
    pub fn new(time: &TimeGrid<T>, stride: usize) -> Result<Self> {
        let width = time.dt() * T::count(BUMP_STEPS);
        let centers = bump_centers(time, width, stride)?;
        Self::with_centers(time, centers, width)
    }

    pub fn with_centers(time: &TimeGrid<T>, centers: Vec<T>, width: T) -> Result<Self> {
        let raw = basis_controls(time, &centers, width)?;
        let w = Quadrature::Trapezoid.weights(time.len(), time.dt());
        let dot = |a: &[Complex<T>], b: &[Complex<T>]| {
            a.iter().zip(b).zip(&w).fold(czero::<T>(), |s, ((x, y), &w)| s + y.conj() * x * w)
        };
        let mut q: Vec<Vec<Complex<T>>> = Vec::with_capacity(raw.len());
        for (j, b) in raw.iter().enumerate() {
            let mut v = b.samples().to_vec();
            let n0 = dot(&v, &v).re.sqrt();
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for u in &q {
                    let c = dot(&v, u);
                    for (x, y) in v.iter_mut().zip(u) {
                        *x = *x - *y * c;
                    }
                }
            }
            let n = dot(&v, &v).re.sqrt();
            if !(n > n0 * T::lit(DEPENDENT)) {
                return Err(Error::InvalidControl(format!(
                    "bump {j} at t = {} is numerically dependent on its predecessors",
                    centers[j]
                )));
            }
            let s = T::one() / n;
            q.push(v.into_iter().map(|x| x * s).collect());
        }
        let controls = q
            .into_iter()
            .map(|s| BoundaryControl::from_samples(*time, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            time: *time,
            centers,
            width,
            controls,
        })
    }

    pub fn time(&self) -> &TimeGrid<T> {
        &self.time
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn controls(&self) -> &[BoundaryControl<T>] {
        &self.controls
    }

    /// `sum_j c_j q_j`.
    pub fn synthesize(&self, coeffs: &[Complex<T>]) -> Result<BoundaryControl<T>> {
        if coeffs.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a basis of {}",
                coeffs.len(),
                self.len()
            )));
        }
        let mut s = vec![czero::<T>(); self.time.len()];
        for (c, q) in coeffs.iter().zip(&self.controls) {
            for (x, y) in s.iter_mut().zip(q.samples()) {
                *x = *x + *y * *c;
            }
        }
        BoundaryControl::from_samples(self.time, s)
    }

    /// Coefficients `(f, q_j)` and the relative `L2` norm of the part of `f`
    /// outside the span.
    pub fn project(&self, f: &BoundaryControl<T>) -> Result<(Vec<Complex<T>>, T)> {
        self.time.ensure_matches(f.grid(), "control and basis")?;
        let w = Quadrature::Trapezoid.weights(self.time.len(), self.time.dt());
        let dot = |a: &[Complex<T>], b: &[Complex<T>]| {
            a.iter().zip(b).zip(&w).fold(czero::<T>(), |s, ((x, y), &w)| s + y.conj() * x * w)
        };
        let coeffs: Vec<Complex<T>> = self.controls.iter().map(|q| dot(f.samples(), q.samples())).collect();
        let back = self.synthesize(&coeffs)?;
        let r: Vec<Complex<T>> = f.samples().iter().zip(back.samples()).map(|(a, b)| a - b).collect();
        let fn2 = dot(f.samples(), f.samples()).re;
        let rel = if fn2 > T::zero() {
            (dot(&r, &r).re / fn2).sqrt()
        } else {
            T::zero()
        };
        Ok((coeffs, rel))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        let t = TimeGrid::new(1.0, 200).unwrap();
        let b = ControlBasis::new(&t, 6).unwrap();
        let w = Quadrature::Trapezoid.weights(t.len(), t.dt());
        for i in 0..b.len() {
            for j in 0..b.len() {
                let g = b.controls()[i]
                    .samples()
                    .iter()
                    .zip(b.controls()[j].samples())
                    .zip(&w)
                    .fold(Complex::new(0.0, 0.0), |s, ((x, y), &w)| s + y.conj() * x * w);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn bumps_project_exactly() {
        let t = TimeGrid::new(1.0, 200).unwrap();
        let b = ControlBasis::new(&t, 6).unwrap();
        let f = crate::field::smoothed_delta(b.centers()[3], b.width(), &t).unwrap();
        let (_, rel) = b.project(&f).unwrap();
        assert!(rel < 1e-10);
    }
}
