//! Sampled elements of the dynamic de Branges space: Fourier images of
//! extended states with the scalar product generated by the connecting
//! operator.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{BoundaryControl, Snapshot};
use crate::frequency::{fourier_image, SpectralCoefficients};
use crate::scalar::{from_c64, to_c64, Real};

use super::control::{connecting_operator, ConnectingOperatorMatrix, ControlMode, ControlOperatorMatrix};

/// Extended control operator together with its connecting operator, shared
/// by every element built on it.
#[derive(Debug, Clone)]
pub struct BTSpace<T> {
    w: Arc<ControlOperatorMatrix<T>>,
    c: Arc<ConnectingOperatorMatrix>,
    coef: SpectralCoefficients<T>,
}

impl<T: Real> BTSpace<T> {
    pub fn new(w: ControlOperatorMatrix<T>) -> Result<Self> {
        if w.mode != ControlMode::Extended {
            return Err(Error::Precondition("de Branges space needs the extended operator".into()));
        }
        let c = connecting_operator(&w)?;
        let coef = SpectralCoefficients::from(w.reduction());
        Ok(Self {
            w: Arc::new(w),
            c: Arc::new(c),
            coef,
        })
    }

    pub fn control(&self) -> &ControlOperatorMatrix<T> {
        &self.w
    }

    pub fn connecting(&self) -> &Arc<ConnectingOperatorMatrix> {
        &self.c
    }

    /// Basis coefficients of `(k1, k2)` and the larger of the two relative
    /// projection residuals.
    pub fn coefficients(&self, k1: &BoundaryControl<T>, k2: &BoundaryControl<T>) -> Result<(Vec<Complex<f64>>, f64)> {
        let basis = &self.w.basis;
        let (c1, r1) = basis.project(k1)?;
        let (c2, r2) = basis.project(k2)?;
        let coeffs = c1.into_iter().chain(c2).map(to_c64).collect();
        Ok((coeffs, r1.as_f64().max(r2.as_f64())))
    }

    /// Extended state `W^T (k1, k2)` at `t = T`.
    pub fn state(&self, coeffs: &[Complex<f64>]) -> Result<Snapshot<T>> {
        self.w.apply(coeffs)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BTElement<T> {
    /// Coefficients of `(k1, k2)` on the control basis, `f` family first.
    pub coeffs: Vec<Complex<f64>>,
    /// Part of the generating pair outside the basis span.
    pub projection_residual: f64,
    pub lambdas: Vec<T>,
    /// `K(lambda)`.
    pub samples: Vec<Complex<T>>,
    #[serde(skip)]
    backing: Arc<ConnectingOperatorMatrix>,
}

impl<T: Real> BTElement<T> {
    pub fn backing(&self) -> &Arc<ConnectingOperatorMatrix> {
        &self.backing
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "lambda,re_k,im_k")?;
        for (l, k) in self.lambdas.iter().zip(&self.samples) {
            writeln!(w, "{},{},{}", l.as_f64(), k.re.as_f64(), k.im.as_f64())?;
        }
        Ok(())
    }
}

/// `K(lambda) = (F W^T (k1, k2))(lambda)` on `lambdas`.
pub fn bt_element<T: Real>(
    space: &BTSpace<T>,
    k1: &BoundaryControl<T>,
    k2: &BoundaryControl<T>,
    lambdas: &[T],
) -> Result<BTElement<T>> {
    let (coeffs, projection_residual) = space.coefficients(k1, k2)?;
    bt_element_from_coeffs(space, coeffs, projection_residual, lambdas)
}

/// Element generated directly by basis coefficients.
pub fn bt_element_from_coeffs<T: Real>(
    space: &BTSpace<T>,
    coeffs: Vec<Complex<f64>>,
    projection_residual: f64,
    lambdas: &[T],
) -> Result<BTElement<T>> {
    let state = space.state(&coeffs)?;
    let samples = if coeffs.iter().all(|c| *c == Complex::new(0.0, 0.0)) {
        vec![from_c64(Complex::new(0.0, 0.0)); lambdas.len()]
    } else {
        fourier_image(&state, &space.coef, lambdas)?
    };
    Ok(BTElement {
        coeffs,
        projection_residual,
        lambdas: lambdas.to_vec(),
        samples,
        backing: Arc::clone(&space.c),
    })
}

/// `[a, b] = (C^T a, b)` on the generating pairs.
pub fn bt_inner<T: Real>(a: &BTElement<T>, b: &BTElement<T>) -> Result<Complex<f64>> {
    if !Arc::ptr_eq(&a.backing, &b.backing) {
        return Err(Error::Precondition("elements belong to different connecting operators".into()));
    }
    a.backing.form(&a.coeffs, &b.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcmethod::{control_operator, ControlBasis};
    use crate::builders::DiracReduction;
    use crate::grid::{SpaceGrid, TimeGrid};

    fn free_space() -> BTSpace<f64> {
        let h: f64 = 1.0 / 100.0;
        let t_max: f64 = 0.5;
        let n = ((2.0 * t_max + 12.0 * h) / h).round() as usize + 1;
        let red = DiracReduction::constant(SpaceGrid::new(h * (n - 1) as f64, n).unwrap(), 0.5, 0.5).unwrap();
        let time = TimeGrid::new(t_max, 100).unwrap();
        let basis = ControlBasis::new(&time, 6).unwrap();
        BTSpace::new(control_operator(&red, &basis, ControlMode::Extended).unwrap()).unwrap()
    }

    #[test]
    fn zero_pair_gives_zero() {
        let s = free_space();
        let z = BoundaryControl::zero(*s.control().basis.time());
        let e = bt_element(&s, &z, &z, &[0.0, 1.0, 2.0]).unwrap();
        assert!(e.samples.iter().all(|k| k.norm() == 0.0));
        assert_eq!(bt_inner(&e, &e).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn equal_pair_matches_sine_transform() {
        let s = free_space();
        let basis = &s.control().basis;
        let f = basis.controls()[4].clone();
        let lambdas: Vec<f64> = (0..9).map(|k| -4.0 + k as f64).collect();
        let e = bt_element(&s, &f, &f, &lambdas).unwrap();
        // state (2 f(T - x/2), 0) against theta_1 = -sin(lambda x / 2)
        let st = s.state(&e.coeffs).unwrap();
        let h = 1.0 / 100.0;
        let w = crate::quadrature::Quadrature::Trapezoid.weights(st.len(), h);
        for (l, k) in lambdas.iter().zip(&e.samples) {
            let direct: Complex<f64> = st
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| v[0] * (-(l * i as f64 * h / 2.0).sin()) * w[i])
                .sum();
            assert!(st.values().iter().all(|v| v[1].norm() < 1e-12));
            assert!((k - direct).norm() < 1e-8, "{l}: {k} vs {direct}");
        }
    }

    #[test]
    fn different_backings_rejected() {
        let (s1, s2) = (free_space(), free_space());
        let f = s1.control().basis.controls()[0].clone();
        let a = bt_element(&s1, &f, &f, &[1.0]).unwrap();
        let b = bt_element(&s2, &f, &f, &[1.0]).unwrap();
        assert!(bt_inner(&a, &b).is_err());
        assert!(bt_inner(&a, &a).unwrap().re > 0.0);
    }
}
