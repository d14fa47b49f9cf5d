//! Reproducing kernel of `B(E)` and its Gram matrices.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{psd_report, PsdReport};
use crate::scalar::{cplx, to_c64, Real};

use super::debranges::EntireFunction;

/// Below this `|conj z - xi|` the kernel is taken as a limit.
pub const SINGULAR_RADIUS: f64 = 1e-6;

/// Relative eigenvalue floor of the positive semidefinite verdict.
pub const PSD_FLOOR: f64 = 1e-10;

fn formula<T: Real, E: EntireFunction<T> + ?Sized>(e: &E, z: Complex<T>, xi: Complex<T>) -> Result<Complex<T>> {
    let num = e.eval(z)?.conj() * e.eval(xi)? - e.eval(z.conj())? * e.eval(xi.conj())?.conj();
    let den = cplx(T::zero(), T::lit(2.0)) * (z.conj() - xi);
    Ok(num / den)
}

/// `J_z(xi) = [conj E(z) E(xi) - E(conj z) conj E(conj xi)] / (2i (conj z - xi))`.
///
/// Near `xi = conj z` the removable singularity is resolved by
/// extrapolating symmetric averages `(g(d) + g(-d))/2`, which are even in
/// `d`, from `d = d0, d0/2, d0/4, d0/8` to `d = 0`.
pub fn reproducing_kernel<T: Real, E: EntireFunction<T> + ?Sized>(e: &E, z: Complex<T>, xi: Complex<T>) -> Result<Complex<T>> {
    let gap = z.conj() - xi;
    if gap.norm() >= T::lit(SINGULAR_RADIUS) {
        return formula(e, z, xi);
    }
    let center = z.conj();
    let d0 = T::lit(1e-2);
    let mut level = Vec::with_capacity(4);
    for k in 0..4 {
        let d = cplx(d0 / T::count(1 << k), T::zero());
        let sym = (formula(e, z, center + d)? + formula(e, z, center - d)?) * T::lit(0.5);
        level.push(sym);
    }
    // Richardson in d^2: ratios 4, 16, 64
    let mut factor = T::lit(4.0);
    while level.len() > 1 {
        level = level
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - T::one()))
            .collect();
        factor *= T::lit(4.0);
    }
    Ok(level[0])
}

/// Gram matrix `G_ij = J_{z_i}(z_j)` with a positive semidefinite verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSample {
    pub points: Vec<[f64; 2]>,
    /// Row-major `n x n`.
    pub gram: Vec<[f64; 2]>,
    pub psd: PsdReport,
    /// Every diagonal entry at a point with `Im z > 0` is real and positive.
    pub diagonal_positive: bool,
    /// Largest `|Im G_ii|`.
    pub diagonal_imag: f64,
}

impl KernelSample {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<f64> {
        let [re, im] = self.gram[i * self.n() + j];
        Complex::new(re, im)
    }
}

pub fn kernel_gram<T: Real, E: EntireFunction<T> + ?Sized>(e: &E, points: &[Complex<T>]) -> Result<KernelSample> {
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let gram = pairs
        .par_iter()
        .map(|&(i, j)| reproducing_kernel(e, points[i], points[j]).map(to_c64))
        .collect::<Result<Vec<_>>>()?;
    let mut diagonal_positive = true;
    let mut diagonal_imag = 0.0_f64;
    for (i, z) in points.iter().enumerate() {
        let g = gram[i * n + i];
        diagonal_imag = diagonal_imag.max(g.im.abs());
        if z.im > T::zero() && !(g.re > 0.0) {
            diagonal_positive = false;
        }
    }
    Ok(KernelSample {
        points: points.iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect(),
        psd: psd_report(n, &gram, PSD_FLOOR),
        gram: gram.iter().map(|g| [g.re, g.im]).collect(),
        diagonal_positive,
        diagonal_imag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::debranges::ClosedForm;
    use std::f64::consts::PI;

    fn exp_e() -> ClosedForm<impl Fn(Complex<f64>) -> Complex<f64> + Sync> {
        ClosedForm(|z: Complex<f64>| (-Complex::<f64>::i() * z).exp())
    }

    fn sinc(w: Complex<f64>) -> Complex<f64> {
        if w.norm() < 1e-12 {
            Complex::new(1.0, 0.0)
        } else {
            w.sin() / w
        }
    }

    #[test]
    fn exponential_gives_sinc_kernel() {
        let e = exp_e();
        let pts = [Complex::new(0.3, 1.2), Complex::new(-2.0, 0.1), Complex::new(1.0, -0.5), Complex::new(4.0, 0.0)];
        for &z in &pts {
            for &xi in &pts {
                let got = reproducing_kernel(&e, z, xi).unwrap();
                assert!((got - sinc(z.conj() - xi)).norm() < 1e-8, "{z} {xi}");
            }
        }
    }

    #[test]
    fn limit_matches_nearby_formula() {
        let e = exp_e();
        let z = Complex::new(0.7, 0.9);
        let lim = reproducing_kernel(&e, z, z.conj()).unwrap();
        let near = formula(&e, z, z.conj() + Complex::new(1e-6, 0.0)).unwrap();
        assert!((lim - near).norm() < 1e-6);
        assert!((lim - 1.0).norm() < 1e-10);
    }

    #[test]
    fn single_point_gram() {
        let g = kernel_gram(&exp_e(), &[Complex::new(0.0, 1.0)]).unwrap();
        assert!((g.entry(0, 0) - 2.0_f64.sinh() / 2.0).norm() < 1e-10);
        assert!(g.psd.psd && g.diagonal_positive);
    }

    #[test]
    fn sinc_zeros_are_orthogonal() {
        let g = kernel_gram(&exp_e(), &[Complex::new(0.0, 0.0), Complex::new(PI, 0.0)]).unwrap();
        assert!(g.entry(0, 1).norm() < 1e-12);
        assert!((g.entry(0, 0) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn hermitian_symmetry() {
        let e = exp_e();
        let (z, xi) = (Complex::new(0.4, 0.8), Complex::new(-1.1, 2.0));
        let a = reproducing_kernel(&e, z, xi).unwrap();
        let b = reproducing_kernel(&e, xi, z).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }
}
