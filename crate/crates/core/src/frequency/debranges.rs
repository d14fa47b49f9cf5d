//! de Branges functions `E_x = Y_1 + i Y_2` and the Hermite–Biehler test.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Mutex;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianField;
use crate::scalar::{cplx, Real};

use super::transfer::TransferSolver;

/// Something that can be evaluated on the whole complex plane.
pub trait EntireFunction<T: Real>: Sync {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>>;

    fn eval_many(&self, zs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        zs.par_iter().map(|&z| self.eval(z)).collect()
    }
}

/// Closed-form entire function, for tests and reference kernels.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm<F>(pub F);

impl<T: Real, F: Fn(Complex<T>) -> Complex<T> + Sync> EntireFunction<T> for ClosedForm<F> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok((self.0)(z))
    }
}

/// Initial vector and normalization of `E_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeBrangesOptions<T> {
    /// `Y(0) = C`, default `(1, 0)`.
    pub c0: [T; 2],
    /// Divide by `E_x(0)` so that `E_x(0) = 1` for any `C`.
    pub normalize: bool,
}

impl<T: Real> Default for DeBrangesOptions<T> {
    fn default() -> Self {
        Self {
            c0: [T::one(), T::zero()],
            normalize: false,
        }
    }
}

/// `E_x(lambda) = Y_1(x, lambda) + i Y_2(x, lambda)` for a fixed Hamiltonian
/// and extent. Values are cached by the bit pattern of `lambda`; the cache
/// only grows, and a concurrent miss simply recomputes the same value.
#[derive(Debug)]
pub struct DeBrangesFunction<T> {
    solver: TransferSolver<T>,
    x: T,
    opts: DeBrangesOptions<T>,
    scale: Complex<T>,
    cache: Mutex<HashMap<(u64, u64), Complex<T>>>,
}

impl<T: Real> DeBrangesFunction<T> {
    pub fn new(h: &HamiltonianField<T>, x: T, opts: DeBrangesOptions<T>) -> Result<Self> {
        if opts.c0 == [T::zero(), T::zero()] {
            return Err(Error::InvalidArgument("initial vector C must be nonzero".into()));
        }
        let mut e = Self {
            solver: TransferSolver::new(h),
            x,
            opts,
            scale: cplx(T::one(), T::zero()),
            cache: Mutex::new(HashMap::new()),
        };
        // E(0) = c0_1 + i c0_2 exactly
        let e0 = cplx(opts.c0[0], opts.c0[1]);
        if opts.normalize {
            e.scale = cplx(T::one(), T::zero()) / e0;
        }
        e.raw(cplx(T::zero(), T::zero()))?;
        Ok(e)
    }

    /// `E` at the full extent of `h`.
    pub fn at_extent(h: &HamiltonianField<T>) -> Result<Self> {
        Self::new(h, h.extent(), DeBrangesOptions::default())
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn options(&self) -> &DeBrangesOptions<T> {
        &self.opts
    }

    pub fn hamiltonian(&self) -> &HamiltonianField<T> {
        self.solver.field()
    }

    pub fn cached_len(&self) -> usize {
        self.cache.lock().map(|c| c.len()).unwrap_or(0)
    }

    fn raw(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        let c = [cplx(self.opts.c0[0], T::zero()), cplx(self.opts.c0[1], T::zero())];
        let y = self.solver.solve(self.x, lambda, c)?;
        Ok((y[0] + y[1] * cplx(T::zero(), T::one())) * self.scale)
    }
}

impl<T: Real> EntireFunction<T> for DeBrangesFunction<T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let key = (z.re.as_f64().to_bits(), z.im.as_f64().to_bits());
        if let Some(v) = self.cache.lock().ok().and_then(|c| c.get(&key).copied()) {
            return Ok(v);
        }
        let v = self.raw(z)?;
        if let Ok(mut c) = self.cache.lock() {
            c.insert(key, v);
        }
        Ok(v)
    }
}

/// `E_x(lambda)` with `Y(0) = (1, 0)`.
pub fn debranges_e<T: Real>(h: &HamiltonianField<T>, x: T, lambda: Complex<T>) -> Result<Complex<T>> {
    DeBrangesFunction::new(h, x, DeBrangesOptions::default())?.eval(lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbPoint {
    pub z: [f64; 2],
    /// `|E(z)| - |E(conj z)|`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbReport {
    pub points: Vec<HbPoint>,
    pub min_margin: f64,
    pub passed: bool,
}

/// `{a + bi : a in -5..=5, b in {0.1, 1, 10}}`.
pub fn standard_hb_grid<T: Real>() -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(33);
    for b in [0.1, 1.0, 10.0] {
        for a in -5..=5 {
            out.push(cplx(T::lit(a as f64), T::lit(b)));
        }
    }
    out
}

/// Hermite–Biehler margins `|E(z)| - |E(conj z)|` on upper half-plane samples.
pub fn hb_check<T: Real, E: EntireFunction<T> + ?Sized>(e: &E, zgrid: &[Complex<T>]) -> Result<HbReport> {
    if let Some(z) = zgrid.iter().find(|z| !(z.im > T::zero())) {
        return Err(Error::InvalidArgument(format!("sample {z} is not in the upper half-plane")));
    }
    let points = zgrid
        .par_iter()
        .map(|&z| {
            let margin = e.eval(z)?.norm() - e.eval(z.conj())?.norm();
            Ok(HbPoint {
                z: [z.re.as_f64(), z.im.as_f64()],
                margin: margin.as_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_margin = points.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    Ok(HbReport {
        passed: !points.is_empty() && min_margin > 0.0,
        min_margin,
        points,
    })
}

/// CSV sweep over real `lambda`: `E`, `|E|`, and the Hermite–Biehler margin
/// at `lambda + i`.
pub fn write_sweep_csv<T: Real, E: EntireFunction<T> + ?Sized, W: Write>(w: &mut W, e: &E, lambdas: &[T]) -> Result<()> {
    writeln!(w, "lambda,re_e,im_e,abs_e,hb_margin_at_lambda_plus_i")?;
    let rows = lambdas
        .par_iter()
        .map(|&l| {
            let v = e.eval(cplx(l, T::zero()))?;
            let z = cplx(l, T::one());
            let m = e.eval(z)?.norm() - e.eval(z.conj())?.norm();
            Ok((l, v, m))
        })
        .collect::<Result<Vec<_>>>()?;
    for (l, v, m) in rows {
        writeln!(w, "{},{},{},{},{}", l.as_f64(), v.re.as_f64(), v.im.as_f64(), v.norm().as_f64(), m.as_f64())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpaceGrid;
    use crate::mat2::Sym2;

    #[test]
    fn half_identity_gives_exponential() {
        let h = HamiltonianField::constant(SpaceGrid::new(2.0, 1601).unwrap(), Sym2::diag(0.5, 0.5)).unwrap();
        let e = DeBrangesFunction::new(&h, 2.0, DeBrangesOptions::default()).unwrap();
        for k in 0..=40 {
            let l = -10.0 + 0.5 * k as f64;
            let v = e.eval(Complex::new(l, 0.0)).unwrap();
            assert!((v - Complex::new(0.0, -l).exp()).norm() < 1e-9, "lambda {l}: {v} vs {}", Complex::new(0.0, -l).exp());
        }
        assert_eq!(e.eval(Complex::new(0.0, 0.0)).unwrap(), Complex::new(1.0, 0.0));
    }

    #[test]
    fn exponential_margin_at_i() {
        let e = ClosedForm(|z: Complex<f64>| (-Complex::<f64>::i() * z).exp());
        let r = hb_check(&e, &[Complex::new(0.0, 1.0)]).unwrap();
        let want = std::f64::consts::E - 1.0 / std::f64::consts::E;
        assert!((r.min_margin - want).abs() < 1e-12 && r.passed);
    }

    #[test]
    fn linear_functions() {
        let g = standard_hb_grid::<f64>();
        assert!(hb_check(&ClosedForm(|z: Complex<f64>| z + Complex::<f64>::i()), &g).unwrap().passed);
        let bad = hb_check(&ClosedForm(|z: Complex<f64>| z - Complex::<f64>::i()), &g).unwrap();
        assert!(!bad.passed && bad.min_margin < 0.0);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let e = ClosedForm(|z: Complex<f64>| z);
        assert!(hb_check(&e, &[Complex::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn normalization_option() {
        let h = HamiltonianField::constant(SpaceGrid::new(1.0, 201).unwrap(), Sym2::diag(0.5, 0.5)).unwrap();
        let opts = DeBrangesOptions {
            c0: [0.0, 2.0],
            normalize: true,
        };
        let e = DeBrangesFunction::new(&h, 1.0, opts).unwrap();
        assert!((e.eval(Complex::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(e.cached_len() >= 1);
    }
}
