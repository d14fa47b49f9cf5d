//! CSV and JSON export.
//!
//! Column orders:
//!
//! | file              | columns                                              |
//! |-------------------|------------------------------------------------------|
//! | snapshot          | `x, re1, im1, re2, im2`                              |
//! | evolution (t-major) | `t, x, re1, im1, re2, im2`                         |
//! | trace             | `t, re, im`                                          |
//! | Hamiltonian       | `x, h11, h12, h22, det, trace`                       |
//! | response matrix   | `t, re_0, im_0, re_1, im_1, ...` (one pair per column) |
//!
//! Numbers are written with Rust's shortest round-trip formatting, so output
//! is deterministic.

use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use crate::error::Result;
use crate::field::{Evolution, Snapshot};
use crate::grid::{SpaceGrid, TimeGrid};
use crate::hamiltonian::HamiltonianField;
use crate::response::ResponseMatrix;
use crate::scalar::Real;

pub fn write_snapshot_csv<T: Real, W: Write>(w: &mut W, grid: &SpaceGrid<T>, s: &Snapshot<T>) -> Result<()> {
    grid.ensure_len(s.len(), "snapshot")?;
    writeln!(w, "x,re1,im1,re2,im2")?;
    for (i, v) in s.values().iter().enumerate() {
        writeln!(w, "{},{},{},{},{}", grid.x(i), v[0].re, v[0].im, v[1].re, v[1].im)?;
    }
    Ok(())
}

pub fn write_evolution_csv<T: Real, W: Write>(
    w: &mut W,
    space: &SpaceGrid<T>,
    time: &TimeGrid<T>,
    ev: &Evolution<T>,
) -> Result<()> {
    writeln!(w, "t,x,re1,im1,re2,im2")?;
    for (&k, frame) in ev.steps().iter().zip(ev.frames()) {
        space.ensure_len(frame.len(), "evolution frame")?;
        let t = time.t(k);
        for (i, v) in frame.iter().enumerate() {
            writeln!(w, "{t},{},{},{},{},{}", space.x(i), v[0].re, v[0].im, v[1].re, v[1].im)?;
        }
    }
    Ok(())
}

pub fn write_trace_csv<T: Real, W: Write>(w: &mut W, time: &TimeGrid<T>, trace: &[Complex<T>]) -> Result<()> {
    writeln!(w, "t,re,im")?;
    for (k, z) in trace.iter().enumerate() {
        writeln!(w, "{},{},{}", time.t(k), z.re, z.im)?;
    }
    Ok(())
}

pub fn write_hamiltonian_csv<T: Real, W: Write>(w: &mut W, grid: &SpaceGrid<T>, h: &HamiltonianField<T>) -> Result<()> {
    writeln!(w, "x,h11,h12,h22,det,trace")?;
    for (i, s) in h.sample_on(grid).iter().enumerate() {
        writeln!(w, "{},{},{},{},{},{}", grid.x(i), s.a, s.b, s.c, s.det(), s.trace())?;
    }
    Ok(())
}

pub fn write_response_csv<T: Real, W: Write>(w: &mut W, r: &ResponseMatrix<T>) -> Result<()> {
    write!(w, "t")?;
    for j in 0..r.n_cols() {
        write!(w, ",re_{j},im_{j}")?;
    }
    writeln!(w)?;
    for i in 0..r.n_rows() {
        write!(w, "{}", r.grid().t(i))?;
        for j in 0..r.n_cols() {
            let e = r.entry(i, j);
            write!(w, ",{},{}", e.re, e.im)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<S: Serialize, W: Write>(w: &mut W, value: &S) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Complex numbers as `[re, im]` pairs for JSON metadata.
pub fn complex_pairs<T: Real>(z: &[Complex<T>]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re.as_f64(), c.im.as_f64()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Sym2;

    #[test]
    fn hamiltonian_csv_rows() {
        let g = SpaceGrid::new(2.0_f64, 3).unwrap();
        let h = HamiltonianField::constant(g, Sym2::identity()).unwrap();
        let mut out = Vec::new();
        write_hamiltonian_csv(&mut out, &g, &h).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("x,h11,h12,h22,det,trace"));
        assert_eq!(text.lines().nth(3), Some("2,1,0,1,1,2"));
    }
}
