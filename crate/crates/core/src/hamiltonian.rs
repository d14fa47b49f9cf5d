//! Hamiltonian fields: 2×2 real symmetric nonnegative matrix functions on the half-line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SpaceGrid;
use crate::interp::cubic_at;
use crate::mat2::Sym2;
use crate::scalar::Real;

/// Structural class of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HamiltonianClass<T> {
    /// Smooth with `H >= delta > 0` on the grid.
    StrictlyPositive { delta: T },
    /// Sampled, rank one everywhere (`det H = 0`).
    RankOne,
    /// Sampled, only `H >= 0` is known.
    Nonnegative,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    Sampled {
        grid: SpaceGrid<T>,
        samples: Vec<Sym2<T>>,
        det: Vec<T>,
        trace: Vec<T>,
        class: HamiltonianClass<T>,
    },
    /// `H = e_j e_j^T` on `(b_{j-1}, b_j)`.
    PiecewiseRank1 { breaks: Vec<T>, vectors: Vec<[T; 2]> },
}

/// A Hamiltonian, either sampled on a [`SpaceGrid`] or piecewise constant of
/// rank one on a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianField<T> {
    repr: Repr<T>,
}

impl<T: Real> HamiltonianField<T> {
    /// Sampled Hamiltonian; validates symmetry/positivity and derives the class.
    ///
    /// `class_hint` of `None` classifies automatically: strictly positive if
    /// the minimum eigenvalue is positive, otherwise nonnegative.
    pub fn sampled(grid: SpaceGrid<T>, samples: Vec<Sym2<T>>, class_hint: Option<HamiltonianClass<T>>) -> Result<Self> {
        grid.ensure_len(samples.len(), "Hamiltonian samples")?;
        if let Some(k) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index: k });
        }
        let mut min_eig = T::infinity();
        for (i, s) in samples.iter().enumerate() {
            let e = s.min_eigenvalue();
            let floor = -T::tol(1e-12) * s.max_abs().max(T::one());
            if e < floor {
                return Err(Error::ClassViolation(format!(
                    "negative eigenvalue {e} at x = {}",
                    grid.x(i)
                )));
            }
            min_eig = min_eig.min(e);
        }
        let class = match class_hint {
            Some(HamiltonianClass::StrictlyPositive { delta }) => {
                // eigenvalues carry rounding relative to the entries
                if min_eig < delta - T::tol(1e-12) * delta.abs().max(T::one()) {
                    return Err(Error::ClassViolation(format!(
                        "minimum eigenvalue {min_eig} below delta {delta}"
                    )));
                }
                HamiltonianClass::StrictlyPositive { delta }
            }
            Some(c) => c,
            None if min_eig > T::zero() => HamiltonianClass::StrictlyPositive { delta: min_eig },
            None => HamiltonianClass::Nonnegative,
        };
        let det = samples.iter().map(|s| s.det()).collect();
        let trace = samples.iter().map(|s| s.trace()).collect();
        Ok(Self {
            repr: Repr::Sampled {
                grid,
                samples,
                det,
                trace,
                class,
            },
        })
    }

    /// Samples a closed-form Hamiltonian on a grid.
    pub fn from_fn(grid: SpaceGrid<T>, f: impl Fn(T) -> Sym2<T>) -> Result<Self> {
        let samples = grid.points().map(f).collect();
        Self::sampled(grid, samples, None)
    }

    /// Constant Hamiltonian on a grid.
    pub fn constant(grid: SpaceGrid<T>, h: Sym2<T>) -> Result<Self> {
        Self::from_fn(grid, |_| h)
    }

    /// Piecewise-constant rank-one field from interval lengths and unit vectors.
    pub fn piecewise_rank1(lengths: &[T], vectors: &[[T; 2]]) -> Result<Self> {
        if lengths.is_empty() || lengths.len() != vectors.len() {
            return Err(Error::InvalidJacobi(format!(
                "{} lengths vs {} vectors",
                lengths.len(),
                vectors.len()
            )));
        }
        let mut breaks = Vec::with_capacity(lengths.len() + 1);
        let mut b = T::zero();
        breaks.push(b);
        for (j, &l) in lengths.iter().enumerate() {
            if !(l > T::zero()) || !l.is_finite() {
                return Err(Error::InvalidJacobi(format!("length l_{} = {l} not positive", j + 1)));
            }
            b += l;
            breaks.push(b);
        }
        for (j, e) in vectors.iter().enumerate() {
            let n = (e[0] * e[0] + e[1] * e[1]).sqrt();
            if (n - T::one()).abs() > T::tol(1e-12) {
                return Err(Error::InvalidJacobi(format!("|e_{}| = {n} is not 1", j + 1)));
            }
        }
        Ok(Self {
            repr: Repr::PiecewiseRank1 {
                breaks,
                vectors: vectors.to_vec(),
            },
        })
    }

    pub fn class(&self) -> Option<HamiltonianClass<T>> {
        match &self.repr {
            Repr::Sampled { class, .. } => Some(*class),
            Repr::PiecewiseRank1 { .. } => None,
        }
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(self.repr, Repr::PiecewiseRank1 { .. })
    }

    /// `delta` of the strictly positive class.
    pub fn delta(&self) -> Option<T> {
        match self.class() {
            Some(HamiltonianClass::StrictlyPositive { delta }) => Some(delta),
            _ => None,
        }
    }

    pub fn require_strictly_positive(&self) -> Result<T> {
        self.delta()
            .ok_or_else(|| Error::ClassViolation("Hamiltonian is not strictly positive".into()))
    }

    pub fn grid(&self) -> Option<&SpaceGrid<T>> {
        match &self.repr {
            Repr::Sampled { grid, .. } => Some(grid),
            Repr::PiecewiseRank1 { .. } => None,
        }
    }

    pub fn require_grid(&self) -> Result<&SpaceGrid<T>> {
        self.grid()
            .ok_or_else(|| Error::Precondition("operation needs a sampled Hamiltonian".into()))
    }

    pub fn samples(&self) -> Option<&[Sym2<T>]> {
        match &self.repr {
            Repr::Sampled { samples, .. } => Some(samples),
            Repr::PiecewiseRank1 { .. } => None,
        }
    }

    pub fn dets(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Sampled { det, .. } => Some(det),
            Repr::PiecewiseRank1 { .. } => None,
        }
    }

    pub fn traces(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Sampled { trace, .. } => Some(trace),
            Repr::PiecewiseRank1 { .. } => None,
        }
    }

    /// Partition `0 = b_0 < b_1 < ...` and vectors of the piecewise representation.
    pub fn partition(&self) -> Option<(&[T], &[[T; 2]])> {
        match &self.repr {
            Repr::PiecewiseRank1 { breaks, vectors } => Some((breaks, vectors)),
            Repr::Sampled { .. } => None,
        }
    }

    /// Right end of the domain.
    pub fn extent(&self) -> T {
        match &self.repr {
            Repr::Sampled { grid, .. } => grid.x_max(),
            Repr::PiecewiseRank1 { breaks, .. } => *breaks.last().expect("nonempty partition"),
        }
    }

    /// Value at `x`: cubic interpolation of samples, or the interval value of
    /// a piecewise field (right-continuous at break points).
    pub fn at(&self, x: T) -> Sym2<T> {
        match &self.repr {
            Repr::Sampled { grid, samples, .. } => {
                cubic_at(samples, x / grid.h())
            }
            Repr::PiecewiseRank1 { breaks, vectors } => {
                let j = breaks[1..].partition_point(|&b| b <= x).min(vectors.len() - 1);
                Sym2::outer(vectors[j])
            }
        }
    }

    /// Values at each node of `grid` (piecewise fields are evaluated pointwise).
    pub fn sample_on(&self, grid: &SpaceGrid<T>) -> Vec<Sym2<T>> {
        match &self.repr {
            Repr::Sampled { grid: g, samples, .. } if g.matches(grid) => samples.clone(),
            _ => grid.points().map(|x| self.at(x)).collect(),
        }
    }

    /// Largest `|H^2 - H|` entry (piecewise representation is exact).
    pub fn idempotency_defect(&self) -> T {
        match &self.repr {
            Repr::PiecewiseRank1 { vectors, .. } => vectors
                .iter()
                .map(|&e| {
                    let h = Sym2::outer(e);
                    (h.square() - h).max_abs()
                })
                .fold(T::zero(), T::max),
            Repr::Sampled { samples, .. } => samples
                .iter()
                .map(|h| (h.square() - *h).max_abs())
                .fold(T::zero(), T::max),
        }
    }

    /// Largest `|H(x)|` entry.
    pub fn max_abs(&self) -> T {
        match &self.repr {
            Repr::Sampled { samples, .. } => samples.iter().map(|s| s.max_abs()).fold(T::zero(), T::max),
            Repr::PiecewiseRank1 { .. } => T::one(),
        }
    }

    /// Order-independent content hash used to tag exported results.
    pub fn content_hash(&self) -> u64 {
        // FNV-1a over the f64 bit patterns
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: f64| {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        match &self.repr {
            Repr::Sampled { grid, samples, .. } => {
                eat(grid.x_max().as_f64());
                eat(grid.len() as f64);
                for s in samples {
                    eat(s.a.as_f64());
                    eat(s.b.as_f64());
                    eat(s.c.as_f64());
                }
            }
            Repr::PiecewiseRank1 { breaks, vectors } => {
                for b in breaks {
                    eat(b.as_f64());
                }
                for e in vectors {
                    eat(e[0].as_f64());
                    eat(e[1].as_f64());
                }
            }
        }
        h
    }
}
