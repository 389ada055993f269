use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform grid on the torus `(0, 2π)^n` with `N` points per dimension.
///
/// Wavenumbers per axis run over `−N/2+1 ..= N/2`; storage uses FFT order,
/// i.e. index `i` holds wavenumber `i` for `i ≤ N/2` and `i − N` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    /// Spatial dimension, 2 or 3.
    pub n: usize,
    /// Points (modes) per dimension, even and at least 8.
    #[serde(rename = "N")]
    pub modes: usize,
}

impl Grid {
    pub fn new(n: usize, modes: usize) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {n}")));
        }
        if modes < 8 || modes % 2 != 0 {
            return Err(Error::Domain(format!(
                "modes per dimension must be even and >= 8, got {modes}"
            )));
        }
        Ok(Self { n, modes })
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI
    }

    /// Total number of grid points / Fourier modes.
    pub fn len(&self) -> usize {
        self.modes.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period() / self.modes as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    /// Measure of the whole torus, `(2π)^n`.
    pub fn volume(&self) -> f64 {
        self.period().powi(self.n as i32)
    }

    /// Signed wavenumber stored at FFT index `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.modes as i64;
        let i = i as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index holding wavenumber `k` (taken modulo `N`).
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.modes as i64) as usize
    }

    /// Splits a flat row-major index into per-axis indices (axis 0 slowest).
    pub fn unflatten(&self, flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut r = flat;
        for a in (0..self.n).rev() {
            out[a] = r % self.modes;
            r /= self.modes;
        }
        out
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter()
            .take(self.n)
            .fold(0, |acc, &i| acc * self.modes + i)
    }

    /// Integer wave vector at a flat index; unused trailing entries are zero.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let idx = self.unflatten(flat);
        let mut k = [0i64; 3];
        for a in 0..self.n {
            k[a] = self.wavenumber(idx[a]);
        }
        k
    }

    /// Flat index of the wave vector `k` (modulo `N` per axis).
    pub fn flat_of(&self, k: &[i64]) -> usize {
        let mut idx = [0usize; 3];
        for a in 0..self.n {
            idx[a] = self.index_of(k[a]);
        }
        self.flatten(&idx[..self.n])
    }

    /// Flat index of `−k`.
    pub fn negate(&self, flat: usize) -> usize {
        let idx = self.unflatten(flat);
        let mut out = [0usize; 3];
        for a in 0..self.n {
            out[a] = (self.modes - idx[a]) % self.modes;
        }
        self.flatten(&out[..self.n])
    }

    /// Physical coordinates of grid point `flat`, `x_a = i_a · h`.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.n {
            x[a] = idx[a] as f64 * h;
        }
        x
    }

    pub fn k_squared(&self, flat: usize) -> f64 {
        let k = self.wavevector(flat);
        k.iter().map(|&c| (c * c) as f64).sum()
    }

    /// Same dimension, `factor` times the modes per axis.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n: self.n,
            modes: self.modes * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1, 16).is_err());
        assert!(Grid::new(2, 6).is_err());
        assert!(Grid::new(2, 15).is_err());
        assert!(Grid::new(3, 8).is_ok());
    }

    #[test]
    fn wavenumber_range() {
        let g = Grid::new(2, 8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        for k in -3..=4 {
            assert_eq!(g.wavenumber(g.index_of(k)), k);
        }
    }

    #[test]
    fn flat_roundtrip_and_negation() {
        let g = Grid::new(3, 8).unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.flatten(&g.unflatten(flat)[..3]), flat);
            let k = g.wavevector(flat);
            let nk = g.wavevector(g.negate(flat));
            for a in 0..3 {
                // the Nyquist wavenumber is its own negative
                if k[a] != 4 {
                    assert_eq!(nk[a], -k[a]);
                }
            }
        }
    }

    #[test]
    fn cell_volume_positive() {
        let g = Grid::new(2, 64).unwrap();
        assert!(g.cell_volume() > 0.0);
        assert!((g.cell_volume() * g.len() as f64 - g.volume()).abs() < 1e-9);
    }
}
