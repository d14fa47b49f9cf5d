//! Response operators assembled column by column, and their comparison.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{DiracReduction, JacobiMatrix};
use crate::error::{Error, Result};
use crate::field::{smoothed_delta, BoundaryControl};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::hamiltonian::HamiltonianField;
use crate::quadrature::Quadrature;
use crate::response::ResponseMatrix;
use crate::scalar::{to_c64, Real};

use super::dirac::{solve_canonical_i, solve_dirac, solve_dirac_type, DiracSign, Orientation};
use super::jacobi::solve_jacobi_continuous;
use super::result::{EvolutionResult, Recording, SolveOptions};
use super::wave::{solve_wave_density, solve_wave_potential};

/// Bump half-width in time steps.
pub const BUMP_STEPS: usize = 6;

/// Absolute bound on response entries strictly before a bump's support.
pub const CAUSALITY_TOL: f64 = 1e-8;

/// A forward solver together with its coefficients.
#[derive(Debug, Clone)]
pub enum SystemDescriptor<T> {
    WavePotential { q: Vec<T>, space: SpaceGrid<T> },
    WaveDensity { rho: Vec<T>, space: SpaceGrid<T> },
    Dirac { p: Vec<T>, q: Vec<T>, space: SpaceGrid<T> },
    DiracType { red: DiracReduction<T>, sign: DiracSign },
    CanonicalI { h: HamiltonianField<T>, orientation: Orientation },
    JacobiContinuous { matrix: JacobiMatrix<T>, n: usize },
}

impl<T: Real> SystemDescriptor<T> {
    pub fn name(&self) -> &'static str {
        match self {
            SystemDescriptor::WavePotential { .. } => "wave-potential",
            SystemDescriptor::WaveDensity { .. } => "wave-density",
            SystemDescriptor::Dirac { .. } => "dirac",
            SystemDescriptor::DiracType { .. } => "dirac-type",
            SystemDescriptor::CanonicalI { .. } => "canonical-i",
            SystemDescriptor::JacobiContinuous { .. } => "jacobi-continuous",
        }
    }

    pub fn solve(&self, f: &BoundaryControl<T>, opts: &SolveOptions) -> Result<EvolutionResult<T>> {
        match self {
            SystemDescriptor::WavePotential { q, space } => solve_wave_potential(q, f, space, opts),
            SystemDescriptor::WaveDensity { rho, space } => solve_wave_density(rho, f, space, opts),
            SystemDescriptor::Dirac { p, q, space } => solve_dirac(p, q, f, space, opts),
            SystemDescriptor::DiracType { red, sign } => solve_dirac_type(red, f, *sign, opts),
            SystemDescriptor::CanonicalI { h, orientation } => solve_canonical_i(h, f, *orientation, opts),
            SystemDescriptor::JacobiContinuous { matrix, n } => solve_jacobi_continuous(matrix, f, *n, opts),
        }
    }

    /// Response trace only.
    pub fn response(&self, f: &BoundaryControl<T>) -> Result<Vec<Complex<T>>> {
        Ok(self.solve(f, &SolveOptions::recording(Recording::Final))?.response)
    }
}

/// Bump centers spaced `stride` steps apart, every support inside `(0, T)`.
pub fn bump_centers<T: Real>(time: &TimeGrid<T>, width: T, stride: usize) -> Result<Vec<T>> {
    if stride == 0 {
        return Err(Error::InvalidArgument("bump stride must be positive".into()));
    }
    let dt = time.dt();
    let first = width + dt;
    let last = time.t_max() - width - dt;
    if last < first {
        return Err(Error::InvalidControl(format!(
            "time horizon {} too short for bumps of half-width {width}",
            time.t_max()
        )));
    }
    let step = dt * T::count(stride);
    let n = ((last - first) / step + T::tol(1e-9)).floor().to_usize().unwrap_or(0) + 1;
    Ok((0..n).map(|j| first + step * T::count(j)).collect())
}

/// Smoothed-delta basis controls of a response matrix.
pub fn basis_controls<T: Real>(time: &TimeGrid<T>, centers: &[T], width: T) -> Result<Vec<BoundaryControl<T>>> {
    centers.iter().map(|&c| smoothed_delta(c, width, time)).collect()
}

/// Discretized response operator with bumps of half-width `6 dt` placed
/// every `stride` steps. Columns are solved in parallel; the result is
/// checked for causality.
pub fn response_matrix<T: Real>(desc: &SystemDescriptor<T>, time: &TimeGrid<T>, stride: usize) -> Result<ResponseMatrix<T>> {
    let width = time.dt() * T::count(BUMP_STEPS);
    let centers = bump_centers(time, width, stride)?;
    response_matrix_on(desc, time, centers, width)
}

pub fn response_matrix_on<T: Real>(
    desc: &SystemDescriptor<T>,
    time: &TimeGrid<T>,
    centers: Vec<T>,
    width: T,
) -> Result<ResponseMatrix<T>> {
    let controls = basis_controls(time, &centers, width)?;
    let columns = controls
        .par_iter()
        .map(|f| desc.response(f))
        .collect::<Result<Vec<_>>>()?;
    let r = ResponseMatrix::from_columns(*time, centers, width, columns)?;
    r.check_causality(T::lit(CAUSALITY_TOL))?;
    Ok(r)
}

/// Declared relation `R1 = a R2 + b I` between two responses, `I` being the
/// matrix whose columns are the basis controls themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Relation {
    Identity,
    Affine { a: Complex<f64>, b: Complex<f64> },
}

impl Relation {
    fn coefficients(self) -> (Complex<f64>, Complex<f64>) {
        match self {
            Relation::Identity => (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
            Relation::Affine { a, b } => (a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseComparison {
    pub relation: Relation,
    /// `|R1 - (a R2 + b I)| / |R1|` in the weighted operator 2-norm.
    pub operator_relative: f64,
    /// Same in the weighted Frobenius norm.
    pub frobenius_relative: f64,
    /// Worst column-wise relative `L2(0, T)` discrepancy.
    pub trace_max: f64,
    /// Root mean square of the column-wise relative discrepancies.
    pub trace_rms: f64,
    pub n_cols: usize,
}

/// Compares two response matrices assembled on the same grid and basis.
pub fn compare_responses<T: Real>(r1: &ResponseMatrix<T>, r2: &ResponseMatrix<T>, relation: Relation) -> Result<ResponseComparison> {
    let (a, b) = relation.coefficients();
    let scaled = r2.combine(from64(a), r2, from64(Complex::new(0.0, 0.0)))?;
    let model = if b == Complex::new(0.0, 0.0) {
        scaled
    } else {
        let basis = identity_matrix(r2)?;
        scaled.combine(from64(Complex::new(1.0, 0.0)), &basis, from64(b))?
    };
    let diff = r1.combine(from64(Complex::new(1.0, 0.0)), &model, from64(Complex::new(-1.0, 0.0)))?;
    let op1 = r1.operator_norm().as_f64();
    let fro1 = r1.norm().as_f64();
    let mut rel = Vec::with_capacity(r1.n_cols());
    for j in 0..r1.n_cols() {
        rel.push(trace_discrepancy(r1.grid(), &diff.column(j), &r1.column(j))?);
    }
    let n = rel.len().max(1) as f64;
    Ok(ResponseComparison {
        relation,
        operator_relative: ratio(diff.operator_norm().as_f64(), op1),
        frobenius_relative: ratio(diff.norm().as_f64(), fro1),
        trace_max: rel.iter().cloned().fold(0.0, f64::max),
        trace_rms: (rel.iter().map(|e| e * e).sum::<f64>() / n).sqrt(),
        n_cols: r1.n_cols(),
    })
}

/// Relative `L2(0, T)` size of `x` against `reference`, trapezoid weights.
pub fn trace_discrepancy<T: Real>(time: &TimeGrid<T>, x: &[Complex<T>], reference: &[Complex<T>]) -> Result<f64> {
    let n = time.len();
    if x.len() != n || reference.len() != n {
        return Err(Error::GridMismatch(format!(
            "traces of length {} and {} on a grid of {n} nodes",
            x.len(),
            reference.len()
        )));
    }
    let w = Quadrature::Trapezoid.weights(n, time.dt().as_f64());
    let norm = |v: &[Complex<T>]| -> f64 { v.iter().zip(&w).map(|(z, w)| w * to_c64(*z).norm_sqr()).sum::<f64>().sqrt() };
    Ok(ratio(norm(x), norm(reference)))
}

/// Relative `L2(0, T)` distance between two traces.
pub fn trace_distance<T: Real>(time: &TimeGrid<T>, x: &[Complex<T>], y: &[Complex<T>]) -> Result<f64> {
    let d: Vec<Complex<T>> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    if d.len() != x.len().max(y.len()) {
        return Err(Error::GridMismatch(format!("traces of length {} and {}", x.len(), y.len())));
    }
    trace_discrepancy(time, &d, y)
}

fn identity_matrix<T: Real>(r: &ResponseMatrix<T>) -> Result<ResponseMatrix<T>> {
    let controls = basis_controls(r.grid(), r.centers(), r.width())?;
    ResponseMatrix::from_columns(
        *r.grid(),
        r.centers().to_vec(),
        r.width(),
        controls.into_iter().map(|c| c.samples().to_vec()).collect(),
    )
}

fn from64<T: Real>(z: Complex<f64>) -> Complex<T> {
    crate::scalar::from_c64(z)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}
