//! Small fixed-size 2×2 algebra used pointwise by Hamiltonians and solvers.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Real symmetric matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// Eigen-decomposition of a [`Sym2`]: `H = R(angle) diag(d1, d2) R(angle)^T`
/// with `R(φ) = [[cos φ, -sin φ], [sin φ, cos φ]]` and `d1 >= d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen<T> {
    pub d1: T,
    pub d2: T,
    pub angle: T,
}

impl<T: Real> Sym2<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::one())
    }

    pub fn diag(a: T, c: T) -> Self {
        Self::new(a, T::zero(), c)
    }

    /// Symmetrizes a general matrix `[[m00, m01], [m10, m11]]`.
    pub fn symmetrize(m00: T, m01: T, m10: T, m11: T) -> Self {
        Self::new(m00, (m01 + m10) * T::lit(0.5), m11)
    }

    /// Outer product `e e^T`.
    pub fn outer(e: [T; 2]) -> Self {
        Self::new(e[0] * e[0], e[0] * e[1], e[1] * e[1])
    }

    /// Rotation `R(φ) diag(d1, d2) R(φ)^T`.
    pub fn from_eigen(d1: T, d2: T, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(
            d1 * c * c + d2 * s * s,
            (d1 - d2) * c * s,
            d1 * s * s + d2 * c * c,
        )
    }

    pub fn trace(&self) -> T {
        self.a + self.c
    }

    pub fn det(&self) -> T {
        self.a * self.c - self.b * self.b
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s)
    }

    /// Inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.c / d, -self.b / d, self.a / d))
    }

    /// Matrix square (symmetric).
    pub fn square(&self) -> Self {
        Self::new(
            self.a * self.a + self.b * self.b,
            self.b * (self.a + self.c),
            self.b * self.b + self.c * self.c,
        )
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn eigen(&self) -> SymEigen<T> {
        let half = T::lit(0.5);
        let mean = (self.a + self.c) * half;
        let diff = (self.a - self.c) * half;
        let rad = diff.hypot(self.b);
        let angle = (T::lit(2.0) * self.b).atan2(self.a - self.c) * half;
        SymEigen {
            d1: mean + rad,
            d2: mean - rad,
            angle,
        }
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigen().d2
    }

    pub fn apply_c(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            v[0] * self.a + v[1] * self.b,
            v[0] * self.b + v[1] * self.c,
        ]
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [
            self.a * v[0] + self.b * v[1],
            self.b * v[0] + self.c * v[1],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

impl<T: Real> Add for Sym2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl<T: Real> Sub for Sym2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl<T: Real> Mul<T> for Sym2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// `J = [[0, 1], [-1, 0]]` applied to a complex 2-vector.
#[inline]
pub fn j_apply<T: Real>(v: [Complex<T>; 2]) -> [Complex<T>; 2] {
    [v[1], -v[0]]
}

/// `J` applied to a real 2-vector.
#[inline]
pub fn j_apply_r<T: Real>(v: [T; 2]) -> [T; 2] {
    [v[1], -v[0]]
}

/// General complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> CMat2<T> {
    pub fn new(m00: Complex<T>, m01: Complex<T>, m10: Complex<T>, m11: Complex<T>) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub fn identity() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self::new(o, z, z, o)
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm_sqr() == T::zero() {
            return None;
        }
        Some(Self::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Real rotation `R(φ)`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let z = T::zero();
        Self::new(
            Complex::new(c, z),
            Complex::new(-s, z),
            Complex::new(s, z),
            Complex::new(c, z),
        )
    }
}
