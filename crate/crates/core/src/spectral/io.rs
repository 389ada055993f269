//! Flat binary container for spectral fields.
//!
//! Layout (all little-endian): `u64 n`, `u64 N`, `u64 components`, then for
//! each component the coefficients `(re: f64, im: f64)` in row-major order of
//! ascending wavenumbers `−N/2+1 ..= N/2` per axis.

use std::io::{Read, Write};

use rustfft::num_complex::Complex64;

use super::{Grid, SpectralField};
use crate::{Error, Result};

fn put_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Flat storage indices in container order.
fn wavenumber_order(grid: &Grid) -> Vec<usize> {
    let m = grid.modes as i64;
    let lo = -m / 2 + 1;
    let mut out = Vec::with_capacity(grid.len());
    let mut k = [0i64; 3];
    for pos in 0..grid.len() {
        let mut r = pos;
        for a in (0..grid.n).rev() {
            k[a] = lo + (r % grid.modes) as i64;
            r /= grid.modes;
        }
        out.push(grid.flat_of(&k[..grid.n]));
    }
    out
}

pub fn write_field<W: Write>(w: &mut W, f: &SpectralField) -> Result<()> {
    let grid = f.grid();
    put_u64(w, grid.n as u64)?;
    put_u64(w, grid.modes as u64)?;
    put_u64(w, f.ncomp() as u64)?;
    write_coefficients(w, f)
}

pub(crate) fn write_coefficients<W: Write>(w: &mut W, f: &SpectralField) -> Result<()> {
    let order = wavenumber_order(&f.grid());
    let mut buf = Vec::with_capacity(16 * order.len());
    for c in 0..f.ncomp() {
        buf.clear();
        let comp = f.component(c);
        for &flat in &order {
            buf.extend_from_slice(&comp[flat].re.to_le_bytes());
            buf.extend_from_slice(&comp[flat].im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<SpectralField> {
    let n = get_u64(r)? as usize;
    let modes = get_u64(r)? as usize;
    let ncomp = get_u64(r)? as usize;
    let grid = Grid::new(n, modes).map_err(|e| Error::Format(format!("bad header: {e}")))?;
    if ncomp == 0 || ncomp > 9 {
        return Err(Error::Format(format!("implausible component count {ncomp}")));
    }
    read_coefficients(r, grid, ncomp)
}

pub(crate) fn read_coefficients<R: Read>(
    r: &mut R,
    grid: Grid,
    ncomp: usize,
) -> Result<SpectralField> {
    let order = wavenumber_order(&grid);
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; ncomp];
    for comp in comps.iter_mut() {
        for &flat in &order {
            let re = get_f64(r)?;
            let im = get_f64(r)?;
            comp[flat] = Complex64::new(re, im);
        }
    }
    SpectralField::from_coefficients(grid, comps)
}
