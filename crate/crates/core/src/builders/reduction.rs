use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::Snapshot;
use crate::grid::SpaceGrid;
use crate::hamiltonian::HamiltonianField;
use crate::interp::derivative;
use crate::mat2::Sym2;
use crate::ode::{rk4_step, Sampled, State};
use crate::quadrature::cumulative_trapezoid;
use crate::scalar::{cplx, Real};

use super::check_samples;

/// Samples with `d1 - d2 <= ISOTROPIC * tr H` have no defined eigen-direction.
const ISOTROPIC: f64 = 1e-9;

/// Largest angle change tolerated between adjacent samples.
const MAX_JUMP: f64 = std::f64::consts::FRAC_PI_4;

/// Diagonal form `D = diag(d1, d2)` of a smooth strictly positive
/// Hamiltonian, `H = R(phi) D R(phi)^T`, with `psi = phi'`.
#[derive(Debug, Clone)]
pub struct DiracReduction<T> {
    grid: SpaceGrid<T>,
    d1: Vec<T>,
    d2: Vec<T>,
    phi: Vec<T>,
    psi: Vec<T>,
    delta: T,
    source: Option<HamiltonianField<T>>,
}

impl<T: Real> DiracReduction<T> {
    /// Reduction given directly by `(D, psi)`; `phi` is `int_0^x psi`.
    pub fn from_parts(grid: SpaceGrid<T>, d1: Vec<T>, d2: Vec<T>, psi: Vec<T>) -> Result<Self> {
        check_samples(&grid, &d1, "d1")?;
        check_samples(&grid, &d2, "d2")?;
        check_samples(&grid, &psi, "psi")?;
        let delta = d1.iter().chain(&d2).fold(T::infinity(), |m, &v| m.min(v));
        if !(delta > T::zero()) {
            let k = d1.iter().zip(&d2).position(|(a, b)| a.min(*b) <= T::zero()).unwrap_or(0);
            return Err(Error::NonPositive {
                x: grid.x(k).as_f64(),
                value: delta.as_f64(),
            });
        }
        let phi = cumulative_trapezoid(&psi, grid.h());
        Ok(Self {
            grid,
            d1,
            d2,
            phi,
            psi,
            delta,
            source: None,
        })
    }

    /// Constant `D`, `psi = 0`.
    pub fn constant(grid: SpaceGrid<T>, d1: T, d2: T) -> Result<Self> {
        let n = grid.len();
        Self::from_parts(grid, vec![d1; n], vec![d2; n], vec![T::zero(); n])
    }

    pub fn grid(&self) -> &SpaceGrid<T> {
        &self.grid
    }

    pub fn d1(&self) -> &[T] {
        &self.d1
    }

    pub fn d2(&self) -> &[T] {
        &self.d2
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn psi(&self) -> &[T] {
        &self.psi
    }

    /// `min(d1, d2)` over the grid.
    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn source(&self) -> Option<&HamiltonianField<T>> {
        self.source.as_ref()
    }

    /// Local speed `1 / sqrt(d1 d2)`.
    pub fn speeds(&self) -> Vec<T> {
        self.d1
            .iter()
            .zip(&self.d2)
            .map(|(&a, &b)| T::one() / (a * b).sqrt())
            .collect()
    }

    pub fn max_speed(&self) -> T {
        self.speeds().into_iter().fold(T::zero(), T::max)
    }

    /// Eikonal `tau(x) = int_0^x sqrt(d1 d2)`.
    pub fn tau(&self) -> Vec<T> {
        let w: Vec<T> = self.d1.iter().zip(&self.d2).map(|(&a, &b)| (a * b).sqrt()).collect();
        cumulative_trapezoid(&w, self.grid.h())
    }

    /// `R(phi) D R(phi)^T` at every node.
    pub fn reconstruct(&self) -> Vec<Sym2<T>> {
        (0..self.grid.len())
            .map(|k| Sym2::from_eigen(self.d1[k], self.d2[k], self.phi[k]))
            .collect()
    }
}

/// Pointwise eigendecomposition with a continuous angle branch.
///
/// The principal angle is unwrapped modulo `pi` (so `d1 >= d2` everywhere).
/// Isotropic samples take the angle interpolated or extrapolated from their
/// anisotropic neighbours.
pub fn diagonalize_h<T: Real>(h: &HamiltonianField<T>) -> Result<DiracReduction<T>> {
    h.require_strictly_positive()?;
    let grid = *h.require_grid()?;
    let samples = h.samples().expect("sampled");
    let n = samples.len();
    let eig: Vec<_> = samples.iter().map(|s| s.eigen()).collect();
    let d1: Vec<T> = eig.iter().map(|e| e.d1).collect();
    let d2: Vec<T> = eig.iter().map(|e| e.d2).collect();
    let delta = d2.iter().fold(T::infinity(), |m, &v| m.min(v));
    if !(delta > T::zero()) {
        return Err(Error::ClassViolation(format!("eigenvalue {delta} not positive")));
    }
    let determined: Vec<bool> = samples
        .iter()
        .zip(&eig)
        .map(|(s, e)| e.d1 - e.d2 > T::tol(ISOTROPIC) * s.trace())
        .collect();
    let pi = T::PI();
    let mut phi = vec![T::zero(); n];
    let mut prev: Option<(usize, T)> = None;
    for k in 0..n {
        if !determined[k] {
            continue;
        }
        let mut a = eig[k].angle;
        if let Some((kp, p)) = prev {
            a = a - ((a - p) / pi).round() * pi;
            let jump = (a - p).abs();
            if jump > T::lit(MAX_JUMP) {
                return Err(Error::AngleJump {
                    x0: grid.x(kp).as_f64(),
                    x1: grid.x(k).as_f64(),
                    jump: jump.as_f64(),
                });
            }
        }
        phi[k] = a;
        prev = Some((k, a));
    }
    fill_isotropic(&mut phi, &determined);
    let psi = derivative(&phi, grid.h());
    Ok(DiracReduction {
        grid,
        d1,
        d2,
        phi,
        psi,
        delta,
        source: Some(h.clone()),
    })
}

/// Fills undetermined angles: linear interpolation across interior gaps,
/// quadratic extrapolation at the ends (linear or constant when fewer
/// neighbours exist).
fn fill_isotropic<T: Real>(phi: &mut [T], known: &[bool]) {
    let idx: Vec<usize> = (0..phi.len()).filter(|&k| known[k]).collect();
    if idx.is_empty() {
        phi.iter_mut().for_each(|p| *p = T::zero());
        return;
    }
    for w in idx.windows(2) {
        let (a, b) = (w[0], w[1]);
        for k in a + 1..b {
            let t = T::count(k - a) / T::count(b - a);
            phi[k] = phi[a] + (phi[b] - phi[a]) * t;
        }
    }
    let extrapolate = |phi: &[T], nodes: &[usize], k: usize| -> T {
        // Lagrange through up to three known nodes
        let mut s = T::zero();
        for (i, &a) in nodes.iter().enumerate() {
            let mut l = T::one();
            for (j, &b) in nodes.iter().enumerate() {
                if i != j {
                    l *= (T::count(k) - T::count(b)) / (T::count(a) - T::count(b));
                }
            }
            s += l * phi[a];
        }
        s
    };
    let head: Vec<usize> = idx.iter().take(3).copied().collect();
    for k in 0..idx[0] {
        phi[k] = extrapolate(phi, &head, k);
    }
    let tail: Vec<usize> = idx.iter().rev().take(3).copied().collect();
    for k in idx[idx.len() - 1] + 1..phi.len() {
        phi[k] = extrapolate(phi, &tail, k);
    }
}

/// Leading amplitude `A = (a1, a2)` of the representation of the forward
/// Dirac-type solution, from the pair
/// `i sqrt(d1) a1' = sqrt(d2) a2'`,
/// `sqrt(d2) (psi a1 + a2') = i sqrt(d1) (psi a2 - a1')`,
/// solved as `a1' = psi a2 / 2 + i sqrt(d2/d1) psi a1 / 2`,
/// `a2' = i sqrt(d1/d2) a1'` by RK4.
pub fn solve_amplitude_a<T: Real>(red: &DiracReduction<T>, a0: [Complex<T>; 2]) -> Result<Snapshot<T>> {
    let grid = red.grid;
    if let Some(k) = red.d1.iter().zip(&red.d2).position(|(a, b)| a.min(*b) <= T::zero()) {
        return Err(Error::SingularCoefficient { x: grid.x(k).as_f64() });
    }
    let alpha = Sampled::new::<T>(red.d1.iter().map(|d| d.sqrt()).collect());
    let beta = Sampled::new::<T>(red.d2.iter().map(|d| d.sqrt()).collect());
    let psi = Sampled::new::<T>(red.psi.clone());
    let half = T::lit(0.5);
    let i = cplx(T::zero(), T::one());
    let rhs = |k: usize, st, y: State<Complex<T>, 2>| {
        let (al, be, ps) = (alpha.get(k, st), beta.get(k, st), psi.get(k, st));
        let [a1, a2] = y.0;
        let d1 = a2 * (ps * half) + i * a1 * (be / al * ps * half);
        State([d1, i * d1 * (al / be)])
    };
    let mut y = State(a0);
    let mut out = Vec::with_capacity(grid.len());
    out.push(a0);
    for k in 0..grid.len() - 1 {
        y = rk4_step(y, k, grid.h(), &rhs);
        out.push(y.0);
    }
    Ok(Snapshot::from_values(out))
}

/// Front amplitude obtained from transport along the outgoing characteristic:
/// `(d1 d2)^{-1/4} exp(i int_0^x psi (d1 + d2) / (2 sqrt(d1 d2))) (sqrt(d2), i sqrt(d1))`,
/// scaled to unit norm at `x = 0`.
pub fn transport_amplitude<T: Real>(red: &DiracReduction<T>) -> Snapshot<T> {
    let n = red.grid.len();
    let rate: Vec<T> = (0..n)
        .map(|k| red.psi[k] * (red.d1[k] + red.d2[k]) / (T::lit(2.0) * (red.d1[k] * red.d2[k]).sqrt()))
        .collect();
    let phase = cumulative_trapezoid(&rate, red.grid.h());
    let raw: Vec<[Complex<T>; 2]> = (0..n)
        .map(|k| {
            let (a, b) = (red.d1[k].sqrt(), red.d2[k].sqrt());
            let m = (a * b).powf(T::lit(-0.5));
            let e = Complex::from_polar(m, phase[k]);
            [e * b, e * cplx(T::zero(), a)]
        })
        .collect();
    let n0 = (raw[0][0].norm_sqr() + raw[0][1].norm_sqr()).sqrt();
    let s = if n0 > T::zero() { T::one() / n0 } else { T::zero() };
    Snapshot::from_values(raw.into_iter().map(|v| [v[0] * s, v[1] * s]).collect())
}
