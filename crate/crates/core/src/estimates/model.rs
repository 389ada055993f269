use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Finite diagonal system on `ℓ²`: `A = diag(λ_i)`, `C = diag(c_i)`,
/// `B = diag(b_i)`, `T(t) = diag(e^{−tλ_i})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalModel {
    pub spectrum: Vec<f64>,
    pub obs: Vec<f64>,
    pub ctrl: Vec<f64>,
}

impl DiagonalModel {
    pub fn new(spectrum: Vec<f64>, obs: Vec<f64>, ctrl: Vec<f64>) -> Result<Self> {
        let d = spectrum.len();
        if d == 0 || obs.len() != d || ctrl.len() != d {
            return Err(Error::Input(format!(
                "model needs matching nonempty weights, got {d}, {}, {}",
                obs.len(),
                ctrl.len()
            )));
        }
        if spectrum.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Domain("spectrum must be positive and finite".into()));
        }
        if obs.iter().chain(&ctrl).any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain("weights must be finite and nonnegative".into()));
        }
        Ok(Self { spectrum, obs, ctrl })
    }

    /// `C = B = I` on the given spectrum.
    pub fn from_spectrum(spectrum: Vec<f64>) -> Result<Self> {
        let d = spectrum.len();
        Self::new(spectrum, vec![1.0; d], vec![1.0; d])
    }

    /// `λ_i = 2^{(i − d/2)/4}`: a quarter-octave ladder centred at 1 whose
    /// range grows with `d` in both directions.
    pub fn geometric(d: usize) -> Result<Self> {
        let half = (d / 2) as f64;
        Self::from_spectrum((0..d).map(|i| 2f64.powf((i as f64 - half) / 4.0)).collect())
    }

    /// `λ_i = 4^i`, `i = 0..d`.
    pub fn powers_of_four(d: usize) -> Result<Self> {
        Self::from_spectrum((0..d).map(|i| 4f64.powi(i as i32)).collect())
    }

    /// Log-uniform spectrum in `[lo, hi]`.
    pub fn random_log_uniform<R: Rng>(d: usize, lo: f64, hi: f64, rng: &mut R) -> Result<Self> {
        let (a, b) = (lo.ln(), hi.ln());
        Self::from_spectrum((0..d).map(|_| rng.gen_range(a..=b).exp()).collect())
    }

    /// `C = A^σ`.
    pub fn with_obs_power(mut self, sigma: f64) -> Self {
        self.obs = self.spectrum.iter().map(|l| l.powf(sigma)).collect();
        self
    }

    /// `B = A^σ`.
    pub fn with_ctrl_power(mut self, sigma: f64) -> Self {
        self.ctrl = self.spectrum.iter().map(|l| l.powf(sigma)).collect();
        self
    }

    pub fn with_obs(mut self, obs: Vec<f64>) -> Result<Self> {
        self.obs = obs;
        Self::new(self.spectrum, self.obs, self.ctrl)
    }

    pub fn with_ctrl(mut self, ctrl: Vec<f64>) -> Result<Self> {
        self.ctrl = ctrl;
        Self::new(self.spectrum, self.obs, self.ctrl)
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.spectrum.iter().cloned().fold(0.0, f64::max)
    }
}
