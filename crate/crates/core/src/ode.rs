//! Classic RK4 marching on a uniform grid with sampled coefficients.

use std::ops::{Add, Mul, Sub};

use crate::scalar::Real;

/// Fixed-size state vector with the arithmetic RK4 needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State<V, const N: usize>(pub [V; N]);

impl<V: Copy + Add<Output = V>, const N: usize> Add for State<V, N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0) {
            *a = *a + b;
        }
        State(out)
    }
}

impl<V: Copy + Mul<T, Output = V>, T: Real, const N: usize> Mul<T> for State<V, N> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        let mut out = self.0;
        for a in out.iter_mut() {
            *a = *a * s;
        }
        State(out)
    }
}

/// Where inside a step the right-hand side is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// At node `k`.
    Node,
    /// At the midpoint between nodes `k` and `k+1`.
    Mid,
    /// At node `k+1`.
    Next,
}

/// One RK4 step from node `k` with step `h`.
#[inline]
pub fn rk4_step<T, S, F>(y: S, k: usize, h: T, f: &F) -> S
where
    T: Real,
    S: Copy + Add<Output = S> + Mul<T, Output = S>,
    F: Fn(usize, Stage, S) -> S,
{
    let half = T::lit(0.5);
    let k1 = f(k, Stage::Node, y);
    let k2 = f(k, Stage::Mid, y + k1 * (h * half));
    let k3 = f(k, Stage::Mid, y + k2 * (h * half));
    let k4 = f(k, Stage::Next, y + k3 * h);
    y + (k1 + k2 * T::lit(2.0) + k3 * T::lit(2.0) + k4) * (h / T::lit(6.0))
}

/// Values at cell midpoints `x_k + h/2` from node samples, fourth-order
/// (four-point Lagrange, one-sided cubic at the two end cells).
pub fn midpoints<T, V>(values: &[V]) -> Vec<V>
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    assert!(n >= 2);
    if n < 4 {
        return values
            .windows(2)
            .map(|w| (w[0] + w[1]) * T::lit(0.5))
            .collect();
    }
    let c16 = T::lit(1.0 / 16.0);
    (0..n - 1)
        .map(|k| {
            if k == 0 {
                // nodes 0..3 at t = 0.5
                (values[0] * T::lit(5.0) + values[1] * T::lit(15.0) - values[2] * T::lit(5.0) + values[3])
                    * c16
            } else if k == n - 2 {
                (values[n - 1] * T::lit(5.0) + values[n - 2] * T::lit(15.0) - values[n - 3] * T::lit(5.0)
                    + values[n - 4])
                    * c16
            } else {
                ((values[k] + values[k + 1]) * T::lit(9.0) - values[k - 1] - values[k + 2]) * c16
            }
        })
        .collect()
}

/// Node, midpoint and next-node lookup for sampled coefficients.
#[derive(Debug, Clone)]
pub struct Sampled<V> {
    pub nodes: Vec<V>,
    pub mids: Vec<V>,
}

impl<V: Copy> Sampled<V> {
    pub fn new<T>(nodes: Vec<V>) -> Self
    where
        T: Real,
        V: Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
    {
        let mids = midpoints::<T, V>(&nodes);
        Self { nodes, mids }
    }

    #[inline]
    pub fn get(&self, k: usize, stage: Stage) -> V {
        match stage {
            Stage::Node => self.nodes[k],
            Stage::Mid => self.mids[k],
            Stage::Next => self.nodes[k + 1],
        }
    }
}
