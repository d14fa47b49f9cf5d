//! Interpolation and differentiation of samples on uniform grids.

use std::ops::{Add, Mul, Sub};

use crate::scalar::Real;

/// Four-point Lagrange interpolation of uniformly spaced samples at position
/// `s` measured in grid cells (`s = x / h`). The stencil is shifted inward at
/// the ends; values outside `[0, n-1]` are extrapolated from the end stencil.
pub fn cubic_at<T, V>(values: &[V], s: T) -> V
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    assert!(n >= 2, "interpolation needs two samples");
    if n < 4 {
        return linear_at(values, s);
    }
    let k = s.floor().to_isize().unwrap_or(0);
    let start = (k - 1).clamp(0, n as isize - 4) as usize;
    let x0 = T::count(start);
    let t = s - x0;
    // nodes at 0,1,2,3 relative to start
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let six = T::lit(6.0);
    let l0 = -(t - one) * (t - two) * (t - three) / six;
    let l1 = t * (t - two) * (t - three) / two;
    let l2 = -t * (t - one) * (t - three) / two;
    let l3 = t * (t - one) * (t - two) / six;
    values[start] * l0 + values[start + 1] * l1 + values[start + 2] * l2 + values[start + 3] * l3
}

/// Piecewise-linear interpolation at position `s` in grid cells.
pub fn linear_at<T, V>(values: &[V], s: T) -> V
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    let k = s.floor().to_isize().unwrap_or(0).clamp(0, n as isize - 2) as usize;
    let w = s - T::count(k);
    values[k] + (values[k + 1] - values[k]) * w
}

/// Second-order derivative of uniform samples: centered inside, one-sided
/// three-point stencils at both ends.
pub fn derivative<T, V>(values: &[V], h: T) -> Vec<V>
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    assert!(n >= 3, "derivative needs three samples");
    let inv2h = T::one() / (T::lit(2.0) * h);
    let mut out = Vec::with_capacity(n);
    out.push(one_sided_start(values, h));
    for i in 1..n - 1 {
        out.push((values[i + 1] - values[i - 1]) * inv2h);
    }
    let e = n - 1;
    out.push((values[e] * T::lit(3.0) - values[e - 1] * T::lit(4.0) + values[e - 2]) * inv2h);
    out
}

/// Derivative of uniform samples, fourth order inside and third order at
/// the two nodes nearest each end. Differencing the result again keeps
/// second order up to the boundary, since the error jumps there are
/// `O(h^3)`.
pub fn derivative4<T, V>(values: &[V], h: T) -> Vec<V>
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let n = values.len();
    assert!(n >= 5, "derivative4 needs five samples");
    let v = values;
    let c = |k: f64| T::lit(k);
    let inv6h = T::one() / (c(6.0) * h);
    let inv12h = T::one() / (c(12.0) * h);
    let edge = |a: V, b: V, d: V, e: V| (b * c(18.0) - a * c(11.0) - d * c(9.0) + e * c(2.0)) * inv6h;
    let near = |a: V, b: V, d: V, e: V| (d * c(6.0) - a * c(2.0) - b * c(3.0) - e) * inv6h;
    let mut out = Vec::with_capacity(n);
    out.push(edge(v[0], v[1], v[2], v[3]));
    out.push(near(v[0], v[1], v[2], v[3]));
    for i in 2..n - 2 {
        out.push((v[i + 1] * c(8.0) - v[i - 1] * c(8.0) - v[i + 2] + v[i - 2]) * inv12h);
    }
    let e = n - 1;
    // mirrored stencils change sign
    out.push(near(v[e], v[e - 1], v[e - 2], v[e - 3]) * c(-1.0));
    out.push(edge(v[e], v[e - 1], v[e - 2], v[e - 3]) * c(-1.0));
    out
}

/// One-sided second-order derivative at the first node:
/// `(-3 v0 + 4 v1 - v2) / (2h)`.
#[inline]
pub fn one_sided_start<T, V>(values: &[V], h: T) -> V
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
{
    let inv2h = T::one() / (T::lit(2.0) * h);
    (values[1] * T::lit(4.0) - values[0] * T::lit(3.0) - values[2]) * inv2h
}

/// Inverse of a nondecreasing sampled function: the position (in grid cells)
/// where `values` first reaches `y`, by linear interpolation. `None` when `y`
/// lies outside the sampled range.
pub fn monotone_inverse<T: Real>(values: &[T], y: T) -> Option<T> {
    let n = values.len();
    if n < 2 || y < values[0] || y > values[n - 1] {
        return None;
    }
    // first index with values[i] >= y
    let i = values.partition_point(|&v| v < y);
    if i == 0 {
        return Some(T::zero());
    }
    let (a, b) = (values[i - 1], values[i]);
    let w = if b > a { (y - a) / (b - a) } else { T::zero() };
    Some(T::count(i - 1) + w)
}
