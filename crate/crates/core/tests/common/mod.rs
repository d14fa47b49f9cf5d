#![allow(dead_code)]

use canonlab::builders::DiracReduction;
use canonlab::{BoundaryControl, Bump, HamiltonianField, SpaceGrid, Sym2, TimeGrid};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `base + amp sin(freq x + phase)`.
#[derive(Debug, Clone, Copy)]
pub struct Wiggle {
    pub base: f64,
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl Wiggle {
    pub fn random(rng: &mut impl Rng, base: (f64, f64), amp: f64) -> Self {
        Self {
            base: rng.gen_range(base.0..base.1),
            amp: rng.gen_range(-amp..=amp),
            freq: rng.gen_range(0.5..2.5),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.base + self.amp * (self.freq * x + self.phase).sin()
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.amp * self.freq * (self.freq * x + self.phase).cos()
    }

    pub fn sample(&self, grid: &SpaceGrid<f64>) -> Vec<f64> {
        grid.points().map(|x| self.at(x)).collect()
    }
}

/// Smooth strictly positive `H = R(phi) diag(d1, d2) R(phi)^T` with
/// `d1 > d2` everywhere.
#[derive(Debug, Clone, Copy)]
pub struct SmoothH {
    pub d1: Wiggle,
    pub d2: Wiggle,
    pub phi: Wiggle,
}

impl SmoothH {
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            d1: Wiggle::random(rng, (1.1, 1.6), 0.25),
            d2: Wiggle::random(rng, (0.45, 0.75), 0.15),
            phi: Wiggle::random(rng, (-0.6, 0.6), 0.5),
        }
    }

    pub fn at(&self, x: f64) -> Sym2<f64> {
        Sym2::from_eigen(self.d1.at(x), self.d2.at(x), self.phi.at(x))
    }

    pub fn det(&self, x: f64) -> f64 {
        self.d1.at(x) * self.d2.at(x)
    }

    pub fn field(&self, grid: SpaceGrid<f64>) -> HamiltonianField<f64> {
        HamiltonianField::from_fn(grid, |x| self.at(x)).unwrap()
    }

    /// Largest characteristic speed `1 / sqrt(det H)` on `[0, x_max]`.
    pub fn max_speed(&self, grid: &SpaceGrid<f64>) -> f64 {
        grid.points().map(|x| 1.0 / self.det(x).sqrt()).fold(0.0, f64::max)
    }

    pub fn reduction(&self, grid: SpaceGrid<f64>) -> DiracReduction<f64> {
        DiracReduction::from_parts(
            grid,
            self.d1.sample(&grid),
            self.d2.sample(&grid),
            grid.points().map(|x| self.phi.slope(x)).collect(),
        )
        .unwrap()
    }
}

pub fn bump_control(time: TimeGrid<f64>, center: f64, width: f64) -> BoundaryControl<f64> {
    let b = Bump::new(center, width);
    BoundaryControl::from_fn(time, b.support(), |t| Complex::new(b.value(t), 0.0)).unwrap()
}

/// Complex bump `b(t) e^{i w t}`.
pub fn chirped_control(time: TimeGrid<f64>, center: f64, width: f64, w: f64) -> BoundaryControl<f64> {
    let b = Bump::new(center, width);
    BoundaryControl::from_fn(time, b.support(), |t| Complex::from_polar(b.value(t), w * t)).unwrap()
}

/// Grid on `[0, x_max]` with spacing `1 / per_unit`.
pub fn grid(x_max: f64, per_unit: usize) -> SpaceGrid<f64> {
    SpaceGrid::new(x_max, (x_max * per_unit as f64).round() as usize + 1).unwrap()
}

/// Cumulative trapezoid of `g` on the grid nodes.
pub fn cumulative(grid: &SpaceGrid<f64>, g: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = grid.h();
    let mut out = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        out[i] = out[i - 1] + 0.5 * h * (g(grid.x(i - 1)) + g(grid.x(i)));
    }
    out
}
