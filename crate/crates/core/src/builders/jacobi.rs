use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianField;
use crate::mat2::j_apply_r;
use crate::scalar::{czero, Real};

/// Minimum `|(e_{j+1}, e_j^perp)|` accepted between adjacent vectors.
const PARALLEL_FLOOR: f64 = 1e-8;

/// Symmetric tridiagonal matrix with diagonal `q_1..q_n` and off-diagonal
/// `rho_1..rho_n`; `rho_n` couples row `n` to the truncated tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiMatrix<T> {
    q: Vec<T>,
    rho: Vec<T>,
}

impl<T: Real> JacobiMatrix<T> {
    /// `rho` may have `q.len()` or `q.len() - 1` entries (missing tail
    /// coupling is zero).
    pub fn from_coefficients(q: Vec<T>, mut rho: Vec<T>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidJacobi("empty matrix".into()));
        }
        if rho.len() + 1 == q.len() {
            rho.push(T::zero());
        }
        if rho.len() != q.len() {
            return Err(Error::InvalidJacobi(format!(
                "{} diagonal vs {} off-diagonal entries",
                q.len(),
                rho.len()
            )));
        }
        if q.iter().chain(&rho).any(|v| !v.is_finite()) {
            return Err(Error::InvalidJacobi("non-finite coefficient".into()));
        }
        Ok(Self { q, rho })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// `q_j`, 1-based.
    pub fn q(&self, j: usize) -> T {
        self.q[j - 1]
    }

    /// `rho_j`, 1-based.
    pub fn rho(&self, j: usize) -> T {
        self.rho[j - 1]
    }

    pub fn diagonal(&self) -> &[T] {
        &self.q
    }

    pub fn off_diagonal(&self) -> &[T] {
        &self.rho
    }

    /// Row `n` (1-based) of `A v` where `v[0] = v_1`; entries past the end
    /// of `v` are zero.
    pub fn row_apply(&self, n: usize, v: &[Complex<T>]) -> Complex<T> {
        let get = |j: usize| if j >= 1 && j <= v.len() { v[j - 1] } else { czero() };
        let mut s = v[n - 1] * self.q(n);
        if n >= 2 {
            s = s + get(n - 1) * self.rho(n - 1);
        }
        s + get(n + 1) * self.rho(n)
    }

    /// `A v` truncated to `v.len()` rows.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert!(v.len() <= self.dim());
        (1..=v.len()).map(|n| self.row_apply(n, v)).collect()
    }

    /// Dense row-major `dim x dim` matrix.
    pub fn to_dense(&self) -> Vec<T> {
        let n = self.dim();
        let mut m = vec![T::zero(); n * n];
        for i in 0..n {
            m[i * n + i] = self.q[i];
            if i + 1 < n {
                m[i * n + i + 1] = self.rho[i];
                m[(i + 1) * n + i] = self.rho[i];
            }
        }
        m
    }

    /// Largest absolute entry (infinity norm bound `max |q| + 2 max |rho|`).
    pub fn norm_bound(&self) -> T {
        let mq = self.q.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let mr = self.rho.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        mq + T::lit(2.0) * mr
    }
}

/// Options for [`build_jacobi_from_partition`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct JacobiOptions<T> {
    /// Replaces the default `q_1 = (1/l_1) (e_1, e_2) / (e_1^perp, e_2)`.
    pub q1: Option<T>,
}

/// JSON input describing a partition by lengths and vector angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpec {
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
    #[serde(default)]
    pub q1: Option<f64>,
}

impl JacobiSpec {
    pub fn build<T: Real>(&self) -> Result<JacobiSystem<T>> {
        let lengths: Vec<T> = self.lengths.iter().map(|&l| T::lit(l)).collect();
        let angles: Vec<T> = self.angles.iter().map(|&a| T::lit(a)).collect();
        JacobiSystem::from_angles(&lengths, &angles, JacobiOptions { q1: self.q1.map(T::lit) })
    }
}

/// Partition `0 = b_0 < b_1 < ...` with lengths `l_j`, unit vectors `e_j`,
/// and the derived Jacobi matrix of dimension `N - 1` for `N` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiSystem<T> {
    lengths: Vec<T>,
    vectors: Vec<[T; 2]>,
    breaks: Vec<T>,
    matrix: JacobiMatrix<T>,
}

impl<T: Real> JacobiSystem<T> {
    pub fn from_angles(lengths: &[T], angles: &[T], opts: JacobiOptions<T>) -> Result<Self> {
        let vectors: Vec<[T; 2]> = angles.iter().map(|a| [a.cos(), a.sin()]).collect();
        build_jacobi_from_partition(lengths, &vectors, opts)
    }

    /// Cells of equal length whose vectors turn by a quarter turn each time,
    /// `(1, 0), (0, 1), (-1, 0), (0, -1), ...`, given exactly so that
    /// `q_j = 0` and `rho_j = 1 / l` hold without rounding.
    pub fn quarter_turns(cells: usize, length: T) -> Result<Self> {
        let (o, z) = (T::one(), T::zero());
        let cycle = [[o, z], [z, o], [-o, z], [z, -o]];
        let vectors: Vec<[T; 2]> = (0..cells).map(|k| cycle[k % 4]).collect();
        build_jacobi_from_partition(&vec![length; cells], &vectors, JacobiOptions::default())
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn vectors(&self) -> &[[T; 2]] {
        &self.vectors
    }

    /// `b_0 = 0, b_1, ..., b_N`.
    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn n_cells(&self) -> usize {
        self.lengths.len()
    }

    pub fn matrix(&self) -> &JacobiMatrix<T> {
        &self.matrix
    }

    /// `l_j`, 1-based.
    pub fn l(&self, j: usize) -> T {
        self.lengths[j - 1]
    }

    /// `e_j`, 1-based.
    pub fn e(&self, j: usize) -> [T; 2] {
        self.vectors[j - 1]
    }
}

impl<T> AsRef<JacobiMatrix<T>> for JacobiMatrix<T> {
    fn as_ref(&self) -> &JacobiMatrix<T> {
        self
    }
}

impl<T> AsRef<JacobiMatrix<T>> for JacobiSystem<T> {
    fn as_ref(&self) -> &JacobiMatrix<T> {
        &self.matrix
    }
}

#[inline]
pub(crate) fn dot<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

/// Builds the tridiagonal matrix of a partition:
/// `rho_j = -1 / ((e_{j+1}, e_j^perp) sqrt(l_j l_{j+1}))` and
/// `q_j = (1/l_j) [(e_j, e_{j+1}) / (e_j^perp, e_{j+1}) - (e_j, e_{j-1}) / (e_j^perp, e_{j-1})]`
/// for `j >= 2`, with `e^perp = J e`. `q_1` drops the `e_{j-1}` term unless
/// overridden.
pub fn build_jacobi_from_partition<T: Real>(
    lengths: &[T],
    vectors: &[[T; 2]],
    opts: JacobiOptions<T>,
) -> Result<JacobiSystem<T>> {
    let n = lengths.len();
    if n < 2 {
        return Err(Error::InvalidJacobi(format!("need at least 2 cells, got {n}")));
    }
    // validates lengths and unit norms
    let field = HamiltonianField::piecewise_rank1(lengths, vectors)?;
    let breaks = field.partition().expect("piecewise").0.to_vec();
    let perp = |j: usize| j_apply_r(vectors[j - 1]);
    let e = |j: usize| vectors[j - 1];
    let cross = |j: usize| dot(e(j + 1), perp(j));
    for j in 1..n {
        if cross(j).abs() < T::tol(PARALLEL_FLOOR) {
            return Err(Error::DegeneratePartition { left: j, right: j + 1 });
        }
    }
    let l = |j: usize| lengths[j - 1];
    let rho: Vec<T> = (1..n).map(|j| -T::one() / (cross(j) * (l(j) * l(j + 1)).sqrt())).collect();
    let q: Vec<T> = (1..n)
        .map(|j| {
            let right = dot(e(j), e(j + 1)) / dot(perp(j), e(j + 1));
            if j == 1 {
                opts.q1.unwrap_or(right / l(1))
            } else {
                let left = dot(e(j), e(j - 1)) / dot(perp(j), e(j - 1));
                (right - left) / l(j)
            }
        })
        .collect();
    Ok(JacobiSystem {
        lengths: lengths.to_vec(),
        vectors: vectors.to_vec(),
        breaks,
        matrix: JacobiMatrix::from_coefficients(q, rho)?,
    })
}

/// Piecewise-constant rank-one Hamiltonian `e_j e_j^T` on each cell.
pub fn build_h_jacobi<T: Real>(sys: &JacobiSystem<T>) -> Result<HamiltonianField<T>> {
    HamiltonianField::piecewise_rank1(&sys.lengths, &sys.vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn quarter_turns() {
        let angles: Vec<f64> = (0..6).map(|j| j as f64 * FRAC_PI_2).collect();
        let s = JacobiSystem::from_angles(&[1.0; 6], &angles, JacobiOptions::default()).unwrap();
        let m = s.matrix();
        for j in 2..=5 {
            assert!(m.q(j).abs() < 1e-15);
        }
        for j in 1..=5 {
            assert!((m.rho(j) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_quarter_turns() {
        let s = JacobiSystem::<f64>::quarter_turns(9, 1.0).unwrap();
        assert!(s.matrix().diagonal().iter().all(|&q| q == 0.0));
        assert!(s.matrix().off_diagonal().iter().all(|&r| r == 1.0));
    }

    #[test]
    fn parallel_neighbours_rejected() {
        let r = build_jacobi_from_partition(&[1.0_f64, 1.0, 1.0], &[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]], JacobiOptions::default());
        assert_eq!(r.unwrap_err(), Error::DegeneratePartition { left: 1, right: 2 });
        let r = build_jacobi_from_partition(&[1.0_f64, 1.0], &[[1.0, 0.0], [-1.0, 0.0]], JacobiOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn q1_override() {
        let s = JacobiSystem::from_angles(&[1.0_f64, 2.0, 1.0], &[0.0, 0.4, 1.1], JacobiOptions { q1: Some(7.0) }).unwrap();
        assert_eq!(s.matrix().q(1), 7.0);
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec: JacobiSpec = serde_json::from_str(r#"{"lengths":[1,1,1],"angles":[0,1.5707963267948966,3.141592653589793]}"#).unwrap();
        let s: JacobiSystem<f64> = spec.build().unwrap();
        assert_eq!(s.matrix().dim(), 2);
    }
}
