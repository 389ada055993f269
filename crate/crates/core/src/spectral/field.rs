use rustfft::num_complex::Complex64;

use super::{fft, Grid};
use crate::{Error, Result};

/// Real-valued field on the torus stored as Fourier coefficients.
///
/// A vector field carries `n` components; tensor fields (forcing terms of the
/// form `∇·F`) carry `n²` components in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        Self {
            grid,
            comps: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; ncomp],
        }
    }

    /// Zero vector field (`n` components).
    pub fn zero_vector(grid: Grid) -> Self {
        Self::zeros(grid, grid.n)
    }

    pub fn from_coefficients(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Grid(format!(
                "component length does not match grid of {} modes",
                grid.len()
            )));
        }
        Ok(Self { grid, comps })
    }

    /// Transforms physical samples (one `Vec` per component, row-major grid
    /// order) into Fourier coefficients.
    pub fn from_physical(grid: Grid, samples: &[Vec<f64>]) -> Result<Self> {
        let mut comps = Vec::with_capacity(samples.len());
        for s in samples {
            if s.len() != grid.len() {
                return Err(Error::Grid("sample length does not match grid".into()));
            }
            let mut data: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft::forward(&grid, &mut data);
            comps.push(data);
        }
        Ok(Self { grid, comps })
    }

    /// Samples `f(x)` at every grid point; `f` returns one value per component.
    pub fn from_fn<F>(grid: Grid, ncomp: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let mut samples = vec![vec![0.0; grid.len()]; ncomp];
        for flat in 0..grid.len() {
            let x = grid.point(flat);
            let v = f(&x[..grid.n]);
            for (c, s) in samples.iter_mut().enumerate() {
                s[flat] = v[c];
            }
        }
        Self::from_physical(grid, &samples).expect("sample shape fixed by grid")
    }

    /// Builds a field from a function of the wave vector.
    pub fn from_spectrum<F>(grid: Grid, ncomp: usize, f: F) -> Self
    where
        F: Fn(&[i64]) -> Vec<Complex64>,
    {
        let mut out = Self::zeros(grid, ncomp);
        for flat in 0..grid.len() {
            let k = grid.wavevector(flat);
            let v = f(&k[..grid.n]);
            for c in 0..ncomp {
                out.comps[c][flat] = v[c];
            }
        }
        out
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn coefficient(&self, c: usize, k: &[i64]) -> Complex64 {
        self.comps[c][self.grid.flat_of(k)]
    }

    pub fn set_coefficient(&mut self, c: usize, k: &[i64], v: Complex64) {
        let flat = self.grid.flat_of(k);
        self.comps[c][flat] = v;
    }

    /// Physical samples of each component (imaginary round-off dropped).
    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| {
                let mut data = c.clone();
                fft::inverse(&self.grid, &mut data);
                data.into_iter().map(|v| v.re).collect()
            })
            .collect()
    }

    /// Pointwise Euclidean magnitude `|f(x_i)|` at every grid point.
    pub fn magnitude(&self) -> Vec<f64> {
        let phys = self.to_physical();
        (0..self.grid.len())
            .map(|i| phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .collect()
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Grid(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.ncomp() != other.ncomp() {
            return Err(Error::Grid(format!(
                "component count {} vs {}",
                self.ncomp(),
                other.ncomp()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(a);
        out
    }

    pub fn scale_in_place(&mut self, a: f64) {
        for c in &mut self.comps {
            for v in c.iter_mut() {
                *v *= a;
            }
        }
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (c, o) in self.comps.iter_mut().zip(&other.comps) {
            for (v, w) in c.iter_mut().zip(o) {
                *v += w * a;
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// `L²` inner product over the torus (real part), via Parseval.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let s: f64 = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum::<f64>())
            .sum();
        Ok(s * self.grid.volume())
    }

    /// `L²(T^n)` norm via Parseval.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self
            .comps
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum();
        (s * self.grid.volume()).sqrt()
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter().map(|v| v.norm()))
            .fold(0.0, f64::max)
    }

    /// `‖û(0)‖`, the modulus of the mean.
    pub fn mean_norm(&self) -> f64 {
        self.comps.iter().map(|c| c[0].norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_mean_zero(&self, tol: f64) -> bool {
        self.mean_norm() <= tol * self.max_abs_coefficient().max(f64::MIN_POSITIVE)
    }

    /// Removes the `k = 0` mode.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.comps {
            c[0] = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// Largest violation of `û(−k) = conj(û(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.comps {
            for flat in 0..self.grid.len() {
                let neg = self.grid.negate(flat);
                worst = worst.max((c[neg] - c[flat].conj()).norm());
            }
        }
        worst
    }

    /// Largest `|k·û(k)|` relative to the largest `|k||û(k)|`.
    pub fn divergence_defect(&self) -> f64 {
        assert_eq!(self.ncomp(), self.grid.n, "divergence needs a vector field");
        let (mut num, mut den): (f64, f64) = (0.0, 0.0);
        for flat in 0..self.grid.len() {
            let k = self.grid.wavevector(flat);
            let mut dot = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for a in 0..self.grid.n {
                let v = self.comps[a][flat];
                dot += v * k[a] as f64;
                mag += v.norm_sqr();
            }
            let kk = (k.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt();
            num = num.max(dot.norm());
            den = den.max(kk * mag.sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.divergence_defect() <= tol
    }

    /// Zero-pads (or truncates) the spectrum onto another grid of the same
    /// dimension, keeping wavenumbers representable on both.
    pub fn resample(&self, target: Grid) -> Result<Self> {
        if target.n != self.grid.n {
            return Err(Error::Grid("resample needs equal dimension".into()));
        }
        let kmax = (self.grid.modes.min(target.modes) / 2) as i64;
        let mut out = Self::zeros(target, self.ncomp());
        for flat in 0..self.grid.len() {
            let k = self.grid.wavevector(flat);
            // Nyquist modes are dropped to keep the result real
            if k[..self.grid.n].iter().any(|&c| c.abs() >= kmax) {
                continue;
            }
            let tf = target.flat_of(&k[..target.n]);
            for c in 0..self.ncomp() {
                out.comps[c][tf] = self.comps[c][flat];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn physical_roundtrip() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(g, 2, |x| vec![x[0].sin() * x[1].cos(), (2.0 * x[1]).cos()]);
        let phys = f.to_physical();
        let back = SpectralField::from_physical(g, &phys).unwrap();
        assert!(f.sub(&back).unwrap().max_abs_coefficient() < 1e-14);
        assert!(f.hermitian_defect() < 1e-14);
    }

    #[test]
    fn parseval_norm_of_sine() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(g, 1, |x| vec![x[0].sin()]);
        assert!((f.l2_norm() - PI * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn divergence_defect_detects_gradients() {
        let g = Grid::new(2, 16).unwrap();
        let solenoidal = SpectralField::from_fn(g, 2, |x| vec![x[1].sin(), 0.0]);
        let gradient = SpectralField::from_fn(g, 2, |x| vec![x[0].cos(), 0.0]);
        assert!(solenoidal.is_divergence_free(1e-12));
        assert!(!gradient.is_divergence_free(1e-12));
    }

    #[test]
    fn resample_preserves_low_modes() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(g, 1, |x| vec![(3.0 * x[0]).sin() + x[1].cos()]);
        let fine = f.resample(g.refined(2)).unwrap();
        assert!((fine.l2_norm() - f.l2_norm()).abs() < 1e-12);
    }
}
