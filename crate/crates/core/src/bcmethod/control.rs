//! Control and connecting operators of the Dirac-type system.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::DiracReduction;
use crate::error::{Error, Result};
use crate::field::{BoundaryControl, Snapshot};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::linalg::{hermitian_defect, psd_report, singular_values, PsdReport};
use crate::quadrature::Quadrature;
use crate::scalar::{from_c64, to_c64, Real};
use crate::timedomain::{solve_dirac_type, DiracSign, Recording, SolveOptions};

use super::basis::ControlBasis;

/// Single forward control `f`, or the pair `(f, g)` driving the forward and
/// auxiliary systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    Single,
    Extended,
}

/// `W` from basis coefficients to states at `t = T` on the nodes with
/// `tau(x) <= T`.
///
/// Rows are `2 i + c` for node `i` and component `c`; columns are the basis
/// controls (`f` family first, then `g` in extended mode). States are
/// paired in `(D V, V)` with trapezoid weights in `x`, the energy product
/// of the Dirac-type system.
#[derive(Debug, Clone, Serialize)]
pub struct ControlOperatorMatrix<T> {
    pub mode: ControlMode,
    #[serde(skip)]
    pub basis: ControlBasis<T>,
    #[serde(skip)]
    pub state_grid: SpaceGrid<T>,
    /// `x(T)`, the inverse eikonal at the horizon.
    pub reach: f64,
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    #[serde(skip)]
    pub data: Vec<Complex<f64>>,
    /// State-space weights, one per row.
    pub weights: Vec<f64>,
    #[serde(skip)]
    red: DiracReduction<T>,
}

fn sign_of(mode: ControlMode, j: usize, n: usize) -> DiracSign {
    match mode {
        ControlMode::Extended if j >= n => DiracSign::Auxiliary,
        _ => DiracSign::Forward,
    }
}

/// Final state of the Dirac-type system for one control.
fn final_state<T: Real>(red: &DiracReduction<T>, f: &BoundaryControl<T>, sign: DiracSign, n_state: usize) -> Result<Vec<Complex<f64>>> {
    let r = solve_dirac_type(red, f, sign, &SolveOptions::recording(Recording::Final))?;
    let frame = r
        .field
        .as_vector()
        .and_then(|v| v.last())
        .ok_or_else(|| Error::Precondition("solver returned no final frame".into()))?;
    Ok(frame[..n_state].iter().flat_map(|v| [to_c64(v[0]), to_c64(v[1])]).collect())
}

/// Assembles the control operator column by column in parallel.
pub fn control_operator<T: Real>(
    red: &DiracReduction<T>,
    basis: &ControlBasis<T>,
    mode: ControlMode,
) -> Result<ControlOperatorMatrix<T>> {
    let time: TimeGrid<T> = *basis.time();
    let tau = red.tau();
    let t_max = time.t_max();
    let grid = *red.grid();
    let inside = tau.iter().take_while(|&&t| t <= t_max * (T::one() + T::tol(1e-12))).count();
    // one node past the front keeps the smeared tail of the last column
    let n_state = (inside + 1).min(grid.len());
    let reach = crate::interp::monotone_inverse(&tau, t_max)
        .map(|s| (s * grid.h()).as_f64())
        .unwrap_or(grid.x_max().as_f64());
    let state_grid = SpaceGrid::new(grid.x(n_state - 1), n_state)?;
    let n = basis.len();
    let cols = match mode {
        ControlMode::Single => n,
        ControlMode::Extended => 2 * n,
    };
    let columns = (0..cols)
        .into_par_iter()
        .map(|j| final_state(red, &basis.controls()[j % n], sign_of(mode, j, n), n_state))
        .collect::<Result<Vec<_>>>()?;
    let rows = 2 * n_state;
    let mut data = vec![Complex::new(0.0, 0.0); rows * cols];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            data[i * cols + j] = *v;
        }
    }
    let q = Quadrature::Trapezoid.weights(n_state, grid.h().as_f64());
    let weights = (0..rows)
        .map(|r| {
            let (i, c) = (r / 2, r % 2);
            let d = if c == 0 { red.d1()[i] } else { red.d2()[i] };
            q[i] * d.as_f64()
        })
        .collect();
    Ok(ControlOperatorMatrix {
        mode,
        basis: basis.clone(),
        state_grid,
        reach,
        rows,
        cols,
        data,
        weights,
        red: red.clone(),
    })
}

impl<T: Real> ControlOperatorMatrix<T> {
    pub fn reduction(&self) -> &DiracReduction<T> {
        &self.red
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<f64> {
        self.data[i * self.cols + j]
    }

    /// State `W c` as a two-component snapshot on `state_grid`.
    pub fn apply(&self, coeffs: &[Complex<f64>]) -> Result<Snapshot<T>> {
        if coeffs.len() != self.cols {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} columns",
                coeffs.len(),
                self.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows / 2);
        for i in 0..self.rows / 2 {
            let mut v = [Complex::new(0.0, 0.0); 2];
            for (c, slot) in v.iter_mut().enumerate() {
                let r = 2 * i + c;
                *slot = (0..self.cols).map(|j| self.entry(r, j) * coeffs[j]).sum();
            }
            out.push([from_c64(v[0]), from_c64(v[1])]);
        }
        Ok(Snapshot::from_values(out))
    }

    /// `Q^{1/2} W`, row-major.
    fn weighted(&self) -> Vec<Complex<f64>> {
        let mut m = self.data.clone();
        for i in 0..self.rows {
            let s = self.weights[i].sqrt();
            for j in 0..self.cols {
                m[i * self.cols + j] *= s;
            }
        }
        m
    }

    /// Singular values of `Q^{1/2} W`, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(self.rows, self.cols, &self.weighted())
    }
}

/// Numerical rank of a single-control operator against the dimension
/// `2n` reached by the extended operator on the same basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub singular_values: Vec<f64>,
    pub sigma_max: f64,
    pub threshold: f64,
    pub rank: usize,
    pub target_dim: usize,
    /// `1 - rank / (2n)`.
    pub defect: f64,
}

/// Relative singular value threshold of the numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-6;

pub fn reachability_defect<T: Real>(w: &ControlOperatorMatrix<T>) -> Result<DefectReport> {
    if w.mode != ControlMode::Single {
        return Err(Error::Precondition("reachability defect needs a single-control operator".into()));
    }
    let sv = w.singular_values();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = RANK_THRESHOLD * sigma_max;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let target_dim = (2 * w.cols).min(w.rows);
    Ok(DefectReport {
        defect: 1.0 - rank as f64 / target_dim.max(1) as f64,
        singular_values: sv,
        sigma_max,
        threshold,
        rank,
        target_dim,
    })
}

/// Default relative floor of the smallest singular value.
pub const SIGMA_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControllabilityReport {
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `sigma_min / sigma_max`.
    pub ratio: f64,
    pub floor: f64,
    pub passed: bool,
}

/// Extended operator is injective on the basis span with
/// `sigma_min > floor * sigma_max`.
pub fn controllability_check<T: Real>(w: &ControlOperatorMatrix<T>, floor: f64) -> Result<ControllabilityReport> {
    if w.mode != ControlMode::Extended {
        return Err(Error::Precondition("controllability check needs the extended operator".into()));
    }
    let sv = w.singular_values();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    // fewer rows than columns leaves a kernel
    let sigma_min = if w.rows < w.cols { 0.0 } else { sv.last().copied().unwrap_or(0.0) };
    let ratio = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    Ok(ControllabilityReport {
        singular_values: sv,
        sigma_min,
        sigma_max,
        ratio,
        floor,
        passed: ratio > floor,
    })
}

/// Successive ratios `sigma_min(coarse) / sigma_min(fine)` of reports on
/// refined grids; values near one mean the floor is stable.
pub fn sigma_min_trend(reports: &[ControllabilityReport]) -> Vec<f64> {
    reports
        .windows(2)
        .map(|w| if w[1].sigma_min > 0.0 { w[0].sigma_min / w[1].sigma_min } else { f64::INFINITY })
        .collect()
}

/// `C = W^H Q W` on basis coefficients, Hermitian-symmetrized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectingOperatorMatrix {
    pub n: usize,
    /// Row-major.
    #[serde(skip)]
    pub data: Vec<Complex<f64>>,
    /// `|C - C^H|` before symmetrization.
    pub asymmetry: f64,
    pub psd: PsdReport,
    pub norm: f64,
}

/// Relative eigenvalue floor for the positive semidefinite verdict.
pub const CONNECTING_PSD_FLOOR: f64 = 1e-10;

pub fn connecting_operator<T: Real>(w: &ControlOperatorMatrix<T>) -> Result<ConnectingOperatorMatrix> {
    if w.mode != ControlMode::Extended {
        return Err(Error::Precondition("connecting operator needs the extended operator".into()));
    }
    let n = w.cols;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let raw: Vec<Complex<f64>> = pairs
        .par_iter()
        .map(|&(a, b)| (0..w.rows).map(|r| w.entry(r, a).conj() * w.entry(r, b) * w.weights[r]).sum())
        .collect();
    let asymmetry = hermitian_defect(n, &raw);
    let mut data = raw.clone();
    for a in 0..n {
        for b in 0..n {
            data[a * n + b] = (raw[a * n + b] + raw[b * n + a].conj()) * 0.5;
        }
    }
    let psd = psd_report(n, &data, CONNECTING_PSD_FLOOR);
    let norm = psd.max_eigenvalue.abs().max(psd.min_eigenvalue.abs());
    Ok(ConnectingOperatorMatrix {
        n,
        data,
        asymmetry,
        psd,
        norm,
    })
}

impl ConnectingOperatorMatrix {
    pub fn entry(&self, a: usize, b: usize) -> Complex<f64> {
        self.data[a * self.n + b]
    }

    /// `(C a, b) = sum_k conj(b_k) (C a)_k`.
    pub fn form(&self, a: &[Complex<f64>], b: &[Complex<f64>]) -> Result<Complex<f64>> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "vectors of length {} and {} for an operator of size {}",
                a.len(),
                b.len(),
                self.n
            )));
        }
        Ok((0..self.n)
            .map(|k| b[k].conj() * (0..self.n).map(|l| self.entry(k, l) * a[l]).sum::<Complex<f64>>())
            .sum())
    }

    /// Largest entrywise distance to `s * identity`.
    pub fn distance_to_identity(&self, s: f64) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..self.n {
            for b in 0..self.n {
                let want = if a == b { s } else { 0.0 };
                worst = worst.max((self.entry(a, b) - want).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::hermitian_eigenvalues(self.n, &self.data)
    }
}
