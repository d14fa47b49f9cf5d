//! Discretized response operators.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::quadrature::Quadrature;
use crate::scalar::{czero, Real};

/// Response operator sampled column by column.
///
/// Column `j` is the response trace (one value per time node) to the `j`-th
/// basis control, a smoothed delta centered at `centers[j]` of half-width
/// `width`. Row `i` is time `t_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseMatrix<T> {
    grid: TimeGrid<T>,
    centers: Vec<T>,
    width: T,
    /// Row-major `n_rows x n_cols`.
    entries: Vec<Complex<T>>,
    /// Time quadrature weights (trapezoid).
    weights: Vec<T>,
}

impl<T: Real> ResponseMatrix<T> {
    pub fn from_columns(grid: TimeGrid<T>, centers: Vec<T>, width: T, columns: Vec<Vec<Complex<T>>>) -> Result<Self> {
        if columns.len() != centers.len() {
            return Err(Error::InvalidArgument(format!(
                "{} columns for {} basis controls",
                columns.len(),
                centers.len()
            )));
        }
        let rows = grid.len();
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::GridMismatch(format!(
                "response column has {} samples, time grid has {rows}",
                c.len()
            )));
        }
        let n_cols = columns.len();
        let mut entries = vec![czero(); rows * n_cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * n_cols + j] = v;
            }
        }
        Ok(Self {
            weights: Quadrature::Trapezoid.weights(rows, grid.dt()),
            grid,
            centers,
            width,
            entries,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn n_rows(&self) -> usize {
        self.grid.len()
    }

    pub fn n_cols(&self) -> usize {
        self.centers.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.n_cols() + j]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.n_rows()).map(|i| self.entry(i, j)).collect()
    }

    /// Response to the control `sum_j c_j basis_j`.
    pub fn apply(&self, coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if coeffs.len() != self.n_cols() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} columns",
                coeffs.len(),
                self.n_cols()
            )));
        }
        Ok((0..self.n_rows())
            .map(|i| {
                coeffs
                    .iter()
                    .enumerate()
                    .fold(czero(), |acc, (j, &c)| acc + self.entry(i, j) * c)
            })
            .collect())
    }

    /// Largest `|entry(i, j)|` with `t_i` strictly before the support of the
    /// `j`-th control.
    pub fn causality_violation(&self) -> T {
        let mut worst = T::zero();
        for j in 0..self.n_cols() {
            let start = self.centers[j] - self.width;
            for i in 0..self.n_rows() {
                if self.grid.t(i) < start {
                    worst = worst.max(self.entry(i, j).norm());
                }
            }
        }
        worst
    }

    pub fn check_causality(&self, tol: T) -> Result<()> {
        let v = self.causality_violation();
        if v < tol {
            Ok(())
        } else {
            Err(Error::Precondition(format!("response is not causal: {v} >= {tol}")))
        }
    }

    /// Weighted `L2(0, T)` Frobenius norm, columns taken as traces.
    pub fn norm(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.n_rows() {
            for j in 0..self.n_cols() {
                s += self.weights[i] * self.entry(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Entrywise `a*self + b*other` on identical grids and bases.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.grid.ensure_matches(&other.grid, "response matrices")?;
        if self.centers != other.centers || self.width != other.width {
            return Err(Error::GridMismatch("response matrices use different control bases".into()));
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
            ..self.clone()
        })
    }

    /// Largest singular value (operator 2-norm) of the weighted matrix.
    pub fn operator_norm(&self) -> T {
        let (rows, cols) = (self.n_rows(), self.n_cols());
        let data: Vec<Complex<f64>> = (0..rows)
            .flat_map(|i| {
                let w = self.weights[i].as_f64().sqrt();
                (0..cols).map(move |j| (i, j, w))
            })
            .map(|(i, j, w)| {
                let e = self.entry(i, j);
                Complex::new(e.re.as_f64() * w, e.im.as_f64() * w)
            })
            .collect();
        let sv = crate::linalg::singular_values(rows, cols, &data);
        T::lit(sv.first().copied().unwrap_or(0.0))
    }
}
