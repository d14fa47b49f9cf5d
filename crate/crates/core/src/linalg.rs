//! Dense Hermitian spectra and singular values in double precision.

use nalgebra::DMatrix;
use num_complex::Complex;

/// Eigenvalues of a Hermitian matrix given row-major, ascending. The input is
/// symmetrized as `(M + M^H)/2` first.
pub fn hermitian_eigenvalues(n: usize, data: &[Complex<f64>]) -> Vec<f64> {
    assert_eq!(data.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_row_slice(n, n, data);
    let h = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Singular values of a `rows x cols` row-major matrix, descending.
pub fn singular_values(rows: usize, cols: usize, data: &[Complex<f64>]) -> Vec<f64> {
    assert_eq!(data.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_row_slice(rows, cols, data);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest Hermitian asymmetry `|M - M^H|` entry.
pub fn hermitian_defect(n: usize, data: &[Complex<f64>]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((data[i * n + j] - data[j * n + i].conj()).norm());
        }
    }
    worst
}

/// Verdict on positive semidefiniteness with the relative floor
/// `min eigenvalue >= -rel * max |eigenvalue|`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub floor: f64,
    pub hermitian_defect: f64,
    pub psd: bool,
}

pub fn psd_report(n: usize, data: &[Complex<f64>], rel: f64) -> PsdReport {
    let ev = hermitian_eigenvalues(n, data);
    let min = ev.first().copied().unwrap_or(0.0);
    let max = ev.last().copied().unwrap_or(0.0);
    let scale = ev.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = -rel * scale;
    PsdReport {
        min_eigenvalue: min,
        max_eigenvalue: max,
        floor,
        hermitian_defect: hermitian_defect(n, data),
        psd: min >= floor,
    }
}
