use serde::{Deserialize, Serialize};

use super::{picard_with, InitialIterate, KatoConfig, Propagator};
use crate::spaces::space_norm;
use crate::spectral::SpectralField;
use crate::time::{trajectory_norm, Trajectory, WeightedTimeNorm};
use crate::{Error, Result};

/// Safety factor applied to the measured bilinear ratio.
pub const ETA_SAFETY: f64 = 2.0;

/// `2 · max ‖B(e, e')‖_E / (‖e‖_E ‖e'‖_E)` over ordered pairs of probes.
pub fn measure_eta(prop: &Propagator, probes: &[Trajectory], e: &WeightedTimeNorm) -> Result<f64> {
    let norms = probes
        .iter()
        .map(|p| trajectory_norm(p, e))
        .collect::<Result<Vec<_>>>()?;
    let mut best: f64 = 0.0;
    for (a, na) in probes.iter().zip(&norms) {
        for (b, nb) in probes.iter().zip(&norms) {
            if *na == 0.0 || *nb == 0.0 {
                continue;
            }
            let r = trajectory_norm(&prop.bilinear(a, b)?, e)? / (na * nb);
            best = best.max(r);
        }
    }
    Ok(ETA_SAFETY * best)
}

/// Amplitude predicted by `‖c·y₁‖_E < 1/(4η)`, with `y₁` the free evolution
/// of the unit direction.
pub fn predicted_threshold(eta: f64, unit_free_norm: f64) -> f64 {
    1.0 / (4.0 * eta * unit_free_norm)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSample {
    pub amplitude: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Result of the amplitude search along a direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Largest amplitude observed to converge (`+∞` for the zero direction).
    pub threshold: f64,
    /// Smallest amplitude observed to fail.
    pub upper: f64,
    /// `‖direction‖_X` before normalisation.
    pub direction_norm: f64,
    pub samples: Vec<ThresholdSample>,
    /// Every converged amplitude lies below every failed one.
    pub monotone: bool,
}

impl ThresholdReport {
    /// Non-monotone convergence pattern; reported, not fatal.
    pub fn ambiguous(&self) -> bool {
        !self.monotone
    }
}

const REL_WIDTH: f64 = 0.05;
const MIN_SAMPLES: usize = 10;
const MAX_BRACKET: usize = 60;

/// Searches for the largest amplitude `c` for which the Picard iteration
/// started at `c · d` converges, `d` the direction normalised in the data
/// space `X`. Brackets by doubling or halving, then bisects geometrically to
/// 5% relative width with at least ten samples.
pub fn smallness_threshold(direction: &SpectralField, cfg: &KatoConfig) -> Result<ThresholdReport> {
    let x_norm = space_norm(direction, &cfg.exponents.data_space())?;
    if x_norm == 0.0 {
        return Ok(ThresholdReport {
            threshold: f64::INFINITY,
            upper: f64::INFINITY,
            direction_norm: 0.0,
            samples: Vec::new(),
            monotone: true,
        });
    }
    let unit = direction.scale(1.0 / x_norm);
    let prop = Propagator::new(direction.grid(), &cfg.time_grid()?, cfg.exponents.shift());
    let mut samples = Vec::new();
    let probe = |c: f64, samples: &mut Vec<ThresholdSample>| -> Result<bool> {
        let (converged, iterations) =
            match picard_with(&prop, &unit.scale(c), None, cfg, InitialIterate::Free) {
                Ok(s) => (true, s.diagnostics.iterations),
                Err(Error::Divergence { diagnostics, .. })
                | Err(Error::NoConvergence { diagnostics, .. }) => (false, diagnostics.iterations),
                Err(e) => return Err(e),
            };
        samples.push(ThresholdSample {
            amplitude: c,
            converged,
            iterations,
        });
        Ok(converged)
    };
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    let mut c = 1.0;
    for _ in 0..MAX_BRACKET {
        if probe(c, &mut samples)? {
            lo = c;
            if hi.is_finite() {
                break;
            }
            c *= 2.0;
        } else {
            hi = c;
            if lo > 0.0 {
                break;
            }
            c /= 2.0;
        }
    }
    if lo == 0.0 || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "could not bracket the threshold (converged up to {lo}, failed from {hi})"
        )));
    }
    while (hi - lo) / lo > REL_WIDTH || samples.len() < MIN_SAMPLES {
        let mid = (lo * hi).sqrt();
        if probe(mid, &mut samples)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let max_conv = samples
        .iter()
        .filter(|s| s.converged)
        .map(|s| s.amplitude)
        .fold(0.0, f64::max);
    let min_div = samples
        .iter()
        .filter(|s| !s.converged)
        .map(|s| s.amplitude)
        .fold(f64::INFINITY, f64::min);
    Ok(ThresholdReport {
        threshold: lo,
        upper: hi,
        direction_norm: x_norm,
        samples,
        monotone: max_conv < min_div,
    })
}

/// Bisected threshold set against the prediction from a measured `η`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdComparison {
    pub eta: f64,
    /// `‖T(·)d‖_E` for the direction normalised in `X`.
    pub unit_free_norm: f64,
    pub predicted: f64,
    pub report: ThresholdReport,
    /// `measured / predicted`.
    pub ratio: f64,
}

impl ThresholdComparison {
    /// Measured and predicted thresholds agree within `factor` either way.
    pub fn within(&self, factor: f64) -> bool {
        self.ratio >= 1.0 / factor && self.ratio <= factor
    }
}

/// Free evolutions probing the bilinear bound: the direction itself and
/// `extra` seeded random solenoidal fields, all normalised in `X`.
pub fn eta_corpus(direction: &SpectralField, cfg: &KatoConfig, extra: usize, seed: u64) -> Result<Vec<Trajectory>> {
    let grid = direction.grid();
    let mut rng = crate::probes::rng(seed);
    let mut fields = vec![direction.clone()];
    for _ in 0..extra {
        fields.push(crate::probes::random_solenoidal(grid, 4, 2.0, &mut rng));
    }
    let x = cfg.exponents.data_space();
    let prop = Propagator::new(grid, &cfg.time_grid()?, cfg.exponents.shift());
    fields
        .iter()
        .filter_map(|f| match space_norm(f, &x) {
            Ok(n) if n > 0.0 => Some(prop.free_evolution(&f.scale(1.0 / n))),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Measures `η` on [`eta_corpus`], predicts `1/(4η‖T(·)d‖_E)` and bisects.
pub fn compare_threshold(direction: &SpectralField, cfg: &KatoConfig, extra: usize, seed: u64) -> Result<ThresholdComparison> {
    let corpus = eta_corpus(direction, cfg, extra, seed)?;
    let prop = Propagator::new(direction.grid(), &cfg.time_grid()?, cfg.exponents.shift());
    let e = cfg.exponents.e_norm();
    let eta = measure_eta(&prop, &corpus, &e)?;
    let report = smallness_threshold(direction, cfg)?;
    let unit = direction.scale(1.0 / report.direction_norm);
    let unit_free_norm = trajectory_norm(&prop.free_evolution(&unit)?, &e)?;
    let predicted = predicted_threshold(eta, unit_free_norm);
    Ok(ThresholdComparison {
        eta,
        unit_free_norm,
        predicted,
        ratio: report.threshold / predicted,
        report,
    })
}
