use rayon::prelude::*;
use serde::Serialize;

use super::model::DiagonalModel;
use super::probes::ProbeFamily;
use crate::quad::{linear_fit, log_grid};
use crate::spaces::{space_norm, SpaceTag};
use crate::spectral::{heat_semigroup, Grid};
use crate::{Error, Result};

/// Fits below this r² are rejected.
pub const MIN_R2: f64 = 0.95;
/// Log-ratio spread below which a profile counts as flat.
pub const FLAT_SPREAD: f64 = 1e-3;

/// `R(t) ≈ c t^{−γ}` fitted on log-log axes.
#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    pub gamma: f64,
    pub c: f64,
    pub r2: f64,
    pub times: Vec<f64>,
    pub ratios: Vec<f64>,
}

fn fit(times: Vec<f64>, ratios: Vec<f64>) -> Result<DecayFit> {
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let (a, b, r2) = linear_fit(&xs, &ys);
    // a flat profile is a valid power law with exponent 0 whatever its r²
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let flat = ys.iter().all(|y| (y - mean).abs() < FLAT_SPREAD);
    if !(r2 >= MIN_R2 || flat) {
        return Err(Error::FitUnreliable {
            r2,
            gamma: -b,
            times,
            ratios,
        });
    }
    Ok(DecayFit {
        gamma: -b,
        c: a.exp(),
        r2,
        times,
        ratios,
    })
}

/// Fits `R(t) = max_w ‖T(t)w‖_Z / ‖w‖_W` over the probe family.
pub fn decay_exponent(w_space: &SpaceTag, z_space: &SpaceTag, probes: &ProbeFamily, times: &[f64]) -> Result<DecayFit> {
    if probes.is_empty() || times.len() < 2 {
        return Err(Error::Input("decay fit needs probes and at least two times".into()));
    }
    if times.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Domain("decay times must be positive".into()));
    }
    let per_probe: Vec<Vec<f64>> = probes
        .probes
        .par_iter()
        .map(|p| -> Result<Vec<f64>> {
            let base = space_norm(&p.field, w_space)?;
            times
                .iter()
                .map(|&t| Ok(space_norm(&heat_semigroup(&p.field, t)?, z_space)? / base))
                .collect()
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = (0..times.len())
        .map(|j| per_probe.iter().map(|r| r[j]).fold(0.0, f64::max))
        .collect();
    fit(times.to_vec(), ratios)
}

/// `‖C T(t)‖ = max_i c_i e^{−tλ_i}` on a diagonal model.
pub fn decay_exponent_diagonal(model: &DiagonalModel, times: &[f64]) -> Result<DecayFit> {
    let ratios = times
        .iter()
        .map(|&t| {
            model
                .spectrum
                .iter()
                .zip(&model.obs)
                .map(|(l, c)| c * (-t * l).exp())
                .fold(0.0, f64::max)
        })
        .collect();
    fit(times.to_vec(), ratios)
}

/// `[10/λ_max, 0.1/λ_min]` with `per_decade` log-spaced points.
pub fn diagonal_window(model: &DiagonalModel, per_decade: usize) -> Vec<f64> {
    log_grid(10.0 / model.max_eigenvalue(), 0.1 / model.min_eigenvalue(), per_decade)
}

/// The torus experiment `W = Ḣ^{−1}_{q/2} → Z = L^q`, whose exponent on
/// `R^n` is `1/2 + n/(2q)`.
#[derive(Clone, Debug)]
pub struct TorusDecaySetting {
    pub n: usize,
    pub q: f64,
    pub grid: Grid,
    pub w_space: SpaceTag,
    pub z_space: SpaceTag,
    pub times: Vec<f64>,
    pub probes: ProbeFamily,
}

impl TorusDecaySetting {
    /// Default resolution: `N = 128` in 2D, `N = 64` in 3D.
    pub fn new(n: usize, q: f64) -> Result<Self> {
        let modes = if n == 2 { 128 } else { 64 };
        Self::with_grid(Grid::new(n, modes)?, q)
    }

    /// Mid-frequency window `[10/k_max², 0.1/k_min²]` with `k_max = N/2`,
    /// `k_min = 1`, and Gaussian-derivative probes whose widths bracket the
    /// extremal width `ℓ*(t)² = 2t n(1 − 2/q)/(1 + n/q)` by a factor 2.
    pub fn with_grid(grid: Grid, q: f64) -> Result<Self> {
        if !(q > 2.0 && q.is_finite()) {
            return Err(Error::Domain(format!("decay experiment needs 2 < q < inf, got {q}")));
        }
        let n = grid.n;
        let kmax = (grid.modes / 2) as f64;
        let times = log_grid(10.0 / (kmax * kmax), 0.1, 4);
        let nf = n as f64;
        let width = |t: f64| (2.0 * t * nf * (1.0 - 2.0 / q) / (1.0 + nf / q)).sqrt();
        let scales = log_grid(0.5 * width(times[0]), 2.0 * width(*times.last().unwrap()), 12);
        Ok(Self {
            n,
            q,
            grid,
            w_space: SpaceTag::HomSobolev {
                s: -1.0,
                q: q / 2.0,
                weak: false,
            },
            z_space: SpaceTag::Lq { q },
            times,
            probes: ProbeFamily::gaussian_derivatives(grid, &scales)?,
        })
    }

    pub fn expected_gamma(&self) -> f64 {
        0.5 + self.n as f64 / (2.0 * self.q)
    }

    pub fn run(&self) -> Result<DecayFit> {
        decay_exponent(&self.w_space, &self.z_space, &self.probes, &self.times)
    }
}
