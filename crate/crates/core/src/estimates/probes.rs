use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::probes::{random_field, rng};
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Probe {
    pub tag: String,
    pub field: SpectralField,
}

/// Tagged, nonzero, mean-zero fields on a common grid.
#[derive(Clone, Debug, Default)]
pub struct ProbeFamily {
    pub probes: Vec<Probe>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub count: usize,
    pub tags: Vec<String>,
}

fn is_nyquist(grid: Grid, k: &[i64]) -> bool {
    let nyq = (grid.modes / 2) as i64;
    k.iter().any(|&c| c.abs() == nyq)
}

impl ProbeFamily {
    pub fn push(&mut self, tag: impl Into<String>, field: SpectralField) -> Result<()> {
        if field.l2_norm() == 0.0 {
            return Err(Error::Input("probe fields must be nonzero".into()));
        }
        if !field.is_mean_zero(1e-14 * field.l2_norm()) {
            return Err(Error::ZeroMode("probe fields must have zero mean".into()));
        }
        self.probes.push(Probe { tag: tag.into(), field });
        Ok(())
    }

    /// `∂₁ G_ℓ` for each width `ℓ`, with `Ĝ_ℓ(k) = e^{−ℓ²|k|²/2}`; a single
    /// scalar component.
    pub fn gaussian_derivatives(grid: Grid, scales: &[f64]) -> Result<Self> {
        let mut fam = Self::default();
        for &l in scales {
            let f = SpectralField::from_spectrum(grid, 1, |k| {
                if is_nyquist(grid, k) {
                    return vec![Complex64::new(0.0, 0.0)];
                }
                let k2: i64 = k.iter().map(|c| c * c).sum();
                vec![Complex64::new(0.0, k[0] as f64 * (-0.5 * l * l * k2 as f64).exp())]
            });
            fam.push(format!("gaussian-derivative:{l:.6e}"), f)?;
        }
        Ok(fam)
    }

    /// Seeded random scalar fields with `|k_a| ≤ kmax`.
    pub fn random(grid: Grid, count: usize, kmax: i64, seed: u64) -> Result<Self> {
        let mut r = rng(seed);
        let mut fam = Self::default();
        for i in 0..count {
            fam.push(format!("random:{i}"), random_field(grid, 1, kmax, 0.0, &mut r))?;
        }
        Ok(fam)
    }

    /// `cos(k·x)` for each wave vector.
    pub fn single_modes(grid: Grid, wavevectors: &[Vec<i64>]) -> Result<Self> {
        let mut fam = Self::default();
        for k in wavevectors {
            if k.len() != grid.n || is_nyquist(grid, k) || k.iter().all(|&c| c == 0) {
                return Err(Error::Input(format!("unusable wave vector {k:?}")));
            }
            let mut f = SpectralField::zeros(grid, 1);
            let neg: Vec<i64> = k.iter().map(|c| -c).collect();
            f.set_coefficient(0, k, Complex64::new(0.5, 0.0));
            f.set_coefficient(0, &neg, Complex64::new(0.5, 0.0));
            fam.push(format!("mode:{k:?}"), f)?;
        }
        Ok(fam)
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn summary(&self) -> ProbeSummary {
        ProbeSummary {
            count: self.len(),
            tags: self.probes.iter().map(|p| p.tag.clone()).collect(),
        }
    }
}

/// Probe vectors for a `d`-dimensional diagonal model: every coordinate
/// vector followed by `random` seeded Gaussian vectors, all of unit length.
pub fn diagonal_probes(d: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            e
        })
        .collect();
    let mut r = rng(seed);
    for _ in 0..random {
        let v: Vec<f64> = (0..d).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|x| x / n).collect());
    }
    out
}

/// Seeded Gaussian vectors of unit length.
pub fn gaussian_vectors(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    diagonal_probes(d, count, seed).split_off(d)
}
