//! Shared characteristic marcher for 2×2 first-order hyperbolic systems.
//!
//! In a travel-time coordinate `sigma` the systems reduce to
//!
//! ```text
//! r_t + r_sigma = a r + b s
//! s_t - s_sigma = c r + d s
//! ```
//!
//! with the outgoing variable `r` set at `sigma = 0` by `r = kappa f + mu s`.
//! On a `sigma` grid with spacing `dt` both families move exactly one node
//! per step; the coupling is integrated by the trapezoid rule along each
//! characteristic, leaving a 2×2 linear solve per node. Data ahead of the
//! front stays exactly zero.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

pub(crate) struct Coefficients<T> {
    pub a: Vec<Complex<T>>,
    pub b: Vec<Complex<T>>,
    pub c: Vec<Complex<T>>,
    pub d: Vec<Complex<T>>,
}

impl<T: Real> Coefficients<T> {
    pub fn nodes(&self) -> usize {
        self.a.len()
    }
}

pub(crate) struct Boundary<T> {
    pub kappa: Complex<T>,
    pub mu: Complex<T>,
}

/// Marches from zero data; calls `visit(step, r, s)` after every step
/// (and once for step 0).
pub(crate) fn march<T: Real>(
    coef: &Coefficients<T>,
    bc: &Boundary<T>,
    control: &[Complex<T>],
    dt: T,
    mut visit: impl FnMut(usize, &[Complex<T>], &[Complex<T>]),
) -> Result<()> {
    let m = coef.nodes();
    if m < 2 {
        return Err(Error::InvalidGrid("characteristic grid needs two nodes".into()));
    }
    let k = dt * T::lit(0.5);
    let one = Complex::new(T::one(), T::zero());
    let mut r = vec![czero::<T>(); m];
    let mut s = vec![czero::<T>(); m];
    let mut r_new = r.clone();
    let mut s_new = s.clone();
    visit(0, &r, &s);
    for n in 0..control.len() - 1 {
        let f = control[n + 1];
        for j in 0..m {
            let s0 = if j + 1 < m {
                s[j + 1] + (coef.c[j + 1] * r[j + 1] + coef.d[j + 1] * s[j + 1]) * k
            } else {
                czero()
            };
            if j == 0 {
                // r = kappa f + mu s;  (1 - k d) s - k c r = s0
                let den = one - coef.d[0] * k - coef.c[0] * bc.mu * k;
                let sj = (s0 + coef.c[0] * bc.kappa * f * k) / den;
                s_new[0] = sj;
                r_new[0] = bc.kappa * f + bc.mu * sj;
            } else {
                let r0 = r[j - 1] + (coef.a[j - 1] * r[j - 1] + coef.b[j - 1] * s[j - 1]) * k;
                let (m11, m12) = (one - coef.a[j] * k, -coef.b[j] * k);
                let (m21, m22) = (-coef.c[j] * k, one - coef.d[j] * k);
                let det = m11 * m22 - m12 * m21;
                r_new[j] = (r0 * m22 - m12 * s0) / det;
                s_new[j] = (m11 * s0 - m21 * r0) / det;
            }
        }
        std::mem::swap(&mut r, &mut r_new);
        std::mem::swap(&mut s, &mut s_new);
        if let Some(j) = r.iter().chain(&s).position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index: j % m });
        }
        visit(n + 1, &r, &s);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_transport_shifts_one_node_per_step() {
        let z = vec![Complex::new(0.0_f64, 0.0); 10];
        let coef = Coefficients {
            a: z.clone(),
            b: z.clone(),
            c: z.clone(),
            d: z,
        };
        let bc = Boundary {
            kappa: Complex::new(1.0, 0.0),
            mu: Complex::new(0.0, 0.0),
        };
        let control: Vec<Complex<f64>> = (0..8).map(|k| Complex::new(k as f64, 0.0)).collect();
        let mut last = Vec::new();
        march(&coef, &bc, &control, 0.1, |_, r, _| last = r.to_vec()).unwrap();
        // after 7 steps node j carries control[7 - j]
        for j in 0..8 {
            assert_eq!(last[j].re, (7 - j) as f64);
        }
        assert_eq!(last[8].re, 0.0);
    }
}
