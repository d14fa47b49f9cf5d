//! Sampled vector fields and boundary controls.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::quadrature::trapezoid_c;
use crate::scalar::{czero, Real};

/// Value of a two-component field at one point.
pub type Vec2<T> = [Complex<T>; 2];

/// A `C^2`-valued field sampled on a [`SpaceGrid`] at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    values: Vec<Vec2<T>>,
}

impl<T: Real> Snapshot<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![[czero(), czero()]; n],
        }
    }

    pub fn from_values(values: Vec<Vec2<T>>) -> Self {
        Self { values }
    }

    pub fn from_fn(grid: &SpaceGrid<T>, f: impl Fn(T) -> Vec2<T>) -> Self {
        Self {
            values: grid.points().map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vec2<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Vec2<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Vec2<T>> {
        self.values
    }

    pub fn component(&self, c: usize) -> Vec<Complex<T>> {
        self.values.iter().map(|v| v[c]).collect()
    }

    pub fn scaled(&self, a: Complex<T>) -> Self {
        Self {
            values: self.values.iter().map(|v| [v[0] * a, v[1] * a]).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| [v[0].conj(), v[1].conj()]).collect(),
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: Complex<T>, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(u, v)| [u[0] + a * v[0], u[1] + a * v[1]])
                .collect(),
        }
    }

    /// Largest pointwise Euclidean norm.
    pub fn max_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt())
            .fold(T::zero(), T::max)
    }

    /// Whether every sample is below `tol` in modulus.
    pub fn is_zero(&self, tol: T) -> bool {
        self.max_norm() < tol
    }
}

/// Field values on a space-time grid. `frames[k]` holds the spatial samples at
/// time index `steps[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTime<V> {
    steps: Vec<usize>,
    frames: Vec<Vec<V>>,
}

impl<V: Clone> SpaceTime<V> {
    pub fn new() -> Self {
        Self {
            steps: Vec::new(),
            frames: Vec::new(),
        }
    }

    pub fn push(&mut self, step: usize, frame: Vec<V>) {
        self.steps.push(step);
        self.frames.push(frame);
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn frames(&self) -> &[Vec<V>] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Frame recorded at time index `step`, if any.
    pub fn at_step(&self, step: usize) -> Option<&[V]> {
        self.steps
            .binary_search(&step)
            .ok()
            .map(|k| self.frames[k].as_slice())
    }

    pub fn last(&self) -> Option<&[V]> {
        self.frames.last().map(|f| f.as_slice())
    }

    /// Whether every time index `0..n` was recorded.
    pub fn is_complete(&self, n: usize) -> bool {
        self.steps.len() == n && self.steps.iter().enumerate().all(|(k, &s)| k == s)
    }

    pub fn map<W, F: Fn(&V) -> W>(&self, f: F) -> SpaceTime<W> {
        SpaceTime {
            steps: self.steps.clone(),
            frames: self
                .frames
                .iter()
                .map(|fr| fr.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Maps whole frames, keeping the step indices.
    pub fn map_frames<W, F: Fn(&[V]) -> Vec<W>>(&self, f: F) -> SpaceTime<W> {
        SpaceTime {
            steps: self.steps.clone(),
            frames: self.frames.iter().map(|fr| f(fr)).collect(),
        }
    }
}

impl<V: Clone> Default for SpaceTime<V> {
    fn default() -> Self {
        Self::new()
    }
}

/// Two-component space-time field.
pub type Evolution<T> = SpaceTime<Vec2<T>>;

/// Complex boundary control sampled on a [`TimeGrid`], zero outside `support`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryControl<T> {
    grid: TimeGrid<T>,
    samples: Vec<Complex<T>>,
    support: (T, T),
}

impl<T: Real> BoundaryControl<T> {
    /// Control from samples; the support is the hull of the nonzero samples.
    pub fn from_samples(grid: TimeGrid<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "control has {} samples, time grid has {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(k) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index: k });
        }
        let first = samples.iter().position(|z| z.norm_sqr() > T::zero());
        let last = samples.iter().rposition(|z| z.norm_sqr() > T::zero());
        let support = match (first, last) {
            (Some(a), Some(b)) => (grid.t(a.saturating_sub(1)), grid.t((b + 1).min(grid.n_steps()))),
            _ => (T::zero(), T::zero()),
        };
        Ok(Self {
            grid,
            samples,
            support,
        })
    }

    /// Samples `f` on the grid, forcing zero outside `[t0, t1]`.
    pub fn from_fn(grid: TimeGrid<T>, support: (T, T), f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let (t0, t1) = support;
        if !(t0 <= t1) {
            return Err(Error::InvalidControl(format!("empty support [{t0}, {t1}]")));
        }
        let samples = grid
            .times()
            .map(|t| if t < t0 || t > t1 { czero() } else { f(t) })
            .collect::<Vec<_>>();
        if let Some(k) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index: k });
        }
        Ok(Self {
            grid,
            samples,
            support,
        })
    }

    pub fn zero(grid: TimeGrid<T>) -> Self {
        Self {
            samples: vec![czero(); grid.len()],
            grid,
            support: (T::zero(), T::zero()),
        }
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn support(&self) -> (T, T) {
        self.support
    }

    pub fn at(&self, k: usize) -> Complex<T> {
        self.samples[k]
    }

    /// Discrete (trapezoid) integral.
    pub fn integral(&self) -> Complex<T> {
        trapezoid_c(&self.samples, self.grid.dt())
    }

    /// Discrete `L2(0, T)` norm.
    pub fn l2_norm(&self) -> T {
        let sq: Vec<Complex<T>> = self
            .samples
            .iter()
            .map(|z| Complex::new(z.norm_sqr(), T::zero()))
            .collect();
        trapezoid_c(&sq, self.grid.dt()).re.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.norm_sqr() == T::zero())
    }

    pub fn scaled(&self, a: Complex<T>) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| z * a).collect(),
            support: self.support,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z.conj()).collect(),
            support: self.support,
        }
    }

    /// `a*self + b*other`; supports are merged.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.grid.ensure_matches(&other.grid, "combined controls")?;
        let s0 = if self.is_zero() {
            other.support
        } else if other.is_zero() {
            self.support
        } else {
            (
                self.support.0.min(other.support.0),
                self.support.1.max(other.support.1),
            )
        };
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
            support: s0,
        })
    }

    /// Resamples onto another grid with the same `t_max` (linear interpolation).
    pub fn resample(&self, grid: TimeGrid<T>) -> Result<Self> {
        if (grid.t_max() - self.grid.t_max()).abs() > T::tol(1e-12) * grid.t_max() {
            return Err(Error::GridMismatch("resampling needs equal t_max".into()));
        }
        let dt = self.grid.dt();
        let n = self.grid.n_steps();
        let samples = grid
            .times()
            .map(|t| {
                let s = t / dt;
                let k = s.floor().to_usize().unwrap_or(0).min(n - 1);
                let w = s - T::count(k);
                self.samples[k] * (T::one() - w) + self.samples[k + 1] * w
            })
            .collect();
        Ok(Self {
            grid,
            samples,
            support: self.support,
        })
    }
}

/// Smooth compactly supported bump `exp(-1/(1-s^2))`, `s = (t - center)/width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump<T> {
    pub center: T,
    pub width: T,
    pub scale: T,
}

impl<T: Real> Bump<T> {
    pub fn new(center: T, width: T) -> Self {
        Self {
            center,
            width,
            scale: T::one(),
        }
    }

    pub fn value(&self, t: T) -> T {
        let s = (t - self.center) / self.width;
        let q = T::one() - s * s;
        if q <= T::zero() {
            T::zero()
        } else {
            self.scale * (-T::one() / q).exp()
        }
    }

    pub fn support(&self) -> (T, T) {
        (self.center - self.width, self.center + self.width)
    }
}

/// Nonnegative `C_0^∞` bump on `[center - width, center + width]` with unit
/// discrete integral, used as an approximate delta control.
pub fn smoothed_delta<T: Real>(center: T, width: T, grid: &TimeGrid<T>) -> Result<BoundaryControl<T>> {
    let dt = grid.dt();
    if width < T::lit(4.0) * dt * (T::one() - T::tol(1e-12)) {
        return Err(Error::InvalidControl(format!(
            "width {width} under-resolved: need at least 4 dt = {}",
            T::lit(4.0) * dt
        )));
    }
    let (a, b) = (center - width, center + width);
    if a <= T::zero() || b >= grid.t_max() {
        return Err(Error::InvalidControl(format!(
            "support [{a}, {b}] not inside (0, {})",
            grid.t_max()
        )));
    }
    let bump = Bump::new(center, width);
    let raw = BoundaryControl::from_fn(*grid, (a, b), |t| Complex::new(bump.value(t), T::zero()))?;
    let mass = raw.integral().re;
    if !(mass > T::zero()) {
        return Err(Error::InvalidControl("bump has no resolved mass".into()));
    }
    Ok(raw.scaled(Complex::new(T::one() / mass, T::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothed_delta_has_unit_mass() {
        let g = TimeGrid::new(1.0_f64, 400).unwrap();
        let b = smoothed_delta(0.5, 4.0 * g.dt(), &g).unwrap();
        assert!((b.integral().re - 1.0).abs() < 1e-12);
        assert!(b.samples().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
    }

    #[test]
    fn smoothed_delta_support_is_exact() {
        let g = TimeGrid::new(1.0_f64, 400).unwrap();
        let w = 6.0 * g.dt();
        let b = smoothed_delta(0.3, w, &g).unwrap();
        for (k, z) in b.samples().iter().enumerate() {
            let t = g.t(k);
            if t <= 0.3 - w || t >= 0.3 + w {
                assert_eq!(z.norm(), 0.0);
            }
        }
        assert_eq!(b.support(), (0.3 - w, 0.3 + w));
    }

    #[test]
    fn disjoint_bumps_have_zero_product() {
        let g = TimeGrid::new(1.0_f64, 400).unwrap();
        let w = 6.0 * g.dt();
        let a = smoothed_delta(0.2, w, &g).unwrap();
        let b = smoothed_delta(0.6, w, &g).unwrap();
        assert!(a
            .samples()
            .iter()
            .zip(b.samples())
            .all(|(x, y)| (x * y).norm() == 0.0));
    }

    #[test]
    fn refinement_keeps_unit_mass() {
        let g = TimeGrid::new(1.0_f64, 400).unwrap();
        let w = 8.0 * g.dt();
        let fine = g.refined();
        let b = smoothed_delta(0.5, w, &fine).unwrap();
        assert!((b.integral().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bumps() {
        let g = TimeGrid::new(1.0_f64, 100).unwrap();
        assert!(smoothed_delta(0.5, 2.0 * g.dt(), &g).is_err());
        assert!(smoothed_delta(0.02, 0.05, &g).is_err());
        assert!(smoothed_delta(0.98, 0.05, &g).is_err());
    }

    #[test]
    fn from_fn_zero_outside_support() {
        let g = TimeGrid::new(1.0_f64, 10).unwrap();
        let c = BoundaryControl::from_fn(g, (0.2, 0.5), |_| Complex::new(1.0, 0.0)).unwrap();
        assert_eq!(c.at(0).norm(), 0.0);
        assert_eq!(c.at(9).norm(), 0.0);
        assert_eq!(c.at(3).norm(), 1.0);
    }
}
