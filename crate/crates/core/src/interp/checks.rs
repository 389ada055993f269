use serde::Serialize;

use super::couple::{check_params, interp_constant, normalized_interp_norm, real_interp_norm, WeightedCouple};
use crate::quad::gl16;
use crate::{Error, Result};

/// Worst ratios seen for the two embeddings
/// `(Ẋ_k, Ẋ_m)_{θ,1} ↪ Ẋ_j ↪ (Ẋ_k, Ẋ_m)_{θ,∞}`, `θ = (j−k)/(m−k)`, with all
/// interpolation norms divided by `c(θ, p)`. Both embeddings hold with
/// constant 1 for the coordinatewise K-functional.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub k: i32,
    pub j: i32,
    pub m: i32,
    pub theta: f64,
    /// `max ‖x‖_{θ,∞} / ‖x‖_{Ẋ_j}`.
    pub outer_ratio: f64,
    /// `max ‖x‖_{Ẋ_j} / ‖x‖_{θ,1}`.
    pub inner_ratio: f64,
    pub probes: usize,
    pub passed: bool,
}

pub const EMBEDDING_TOL: f64 = 1e-9;

pub fn check_embedding_chain(spectrum: &[f64], k: i32, j: i32, m: i32, probes: &[Vec<f64>]) -> Result<EmbeddingReport> {
    if !(k < j && j < m) {
        return Err(Error::Domain(format!("embedding chain needs k < j < m, got ({k}, {j}, {m})")));
    }
    let couple = WeightedCouple::homogeneous(spectrum, k, m)?;
    let theta = (j - k) as f64 / (m - k) as f64;
    let mut outer_ratio: f64 = 0.0;
    let mut inner_ratio: f64 = 0.0;
    for x in probes {
        let mid: f64 = spectrum
            .iter()
            .zip(x)
            .map(|(l, v)| (l.powi(j) * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if mid == 0.0 {
            continue;
        }
        let weak = normalized_interp_norm(&couple, x, theta, f64::INFINITY)?;
        let strong = normalized_interp_norm(&couple, x, theta, 1.0)?;
        outer_ratio = outer_ratio.max(weak / mid);
        inner_ratio = inner_ratio.max(mid / strong);
    }
    Ok(EmbeddingReport {
        k,
        j,
        m,
        theta,
        outer_ratio,
        inner_ratio,
        probes: probes.len(),
        passed: outer_ratio <= 1.0 + EMBEDDING_TOL && inner_ratio <= 1.0 + EMBEDDING_TOL,
    })
}

/// Ratio interval of the iterated norm against the direct
/// `(Ẋ_{−1}, Ẋ_1)_{1/2,p}` norm over a probe set.
#[derive(Clone, Debug, Serialize)]
pub struct ReiterationReport {
    pub theta: f64,
    #[serde(with = "crate::exponent")]
    pub q: f64,
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub probes: usize,
}

/// Norm of `x` in `((Ẋ_{−1}, X)_{θ,q}, (X, Ẋ_1)_{θ,q})_{1−θ,p}`, divided by
/// `c(θ,q)·c(1−θ,p)` so that coordinate vectors have norm 1.
///
/// The outer K-functional is evaluated on the threshold splitting: at level
/// `t` the coordinates with `λ_i ≥ 1/t` go to the first space. Each inner norm
/// is a genuine `(θ, q)` norm of the split part. Between consecutive levels
/// `1/λ_i` the outer K-functional is `A + tB` with fixed `A, B`.
pub fn reiterated_norm(spectrum: &[f64], x: &[f64], theta: f64, q: f64, p: f64) -> Result<f64> {
    check_params(theta, q)?;
    check_params(1.0 - theta, p)?;
    if spectrum.len() != x.len() {
        return Err(Error::Input("spectrum and vector lengths differ".into()));
    }
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    if order.is_empty() {
        return Ok(0.0);
    }
    // levels 1/λ_i increasing, so λ descending
    order.sort_by(|&a, &b| spectrum[b].total_cmp(&spectrum[a]));
    let low = WeightedCouple::homogeneous(spectrum, -1, 0)?;
    let high = WeightedCouple::homogeneous(spectrum, 0, 1)?;
    let levels: Vec<f64> = order.iter().map(|&i| 1.0 / spectrum[i]).collect();
    // (A, B) on [levels[w], levels[w+1]): the first w+1 coordinates in the first space
    let mut parts = Vec::with_capacity(order.len() + 1);
    let mut first = vec![0.0; x.len()];
    let mut second = x.to_vec();
    parts.push((0.0, real_interp_norm(&high, &second, theta, q)?));
    for &i in &order {
        first[i] = x[i];
        second[i] = 0.0;
        let a = real_interp_norm(&low, &first, theta, q)?;
        let b = if second.iter().all(|v| *v == 0.0) {
            0.0
        } else {
            real_interp_norm(&high, &second, theta, q)?
        };
        parts.push((a, b));
    }
    let s = 1.0 - theta;
    let norm = if p.is_infinite() {
        // t^{−s}(A + tB) has no interior maximum
        let mut best: f64 = 0.0;
        for (w, &t) in levels.iter().enumerate() {
            let (a, b) = parts[w];
            best = best.max(t.powf(-s) * (a + t * b));
        }
        best
    } else {
        let (_, b0) = parts[0];
        let mut total = b0.powf(p) * levels[0].powf(theta * p) / (theta * p);
        let rule = gl16();
        for w in 0..levels.len() - 1 {
            let (a, b) = parts[w + 1];
            let (lo, hi) = (levels[w].ln(), levels[w + 1].ln());
            if hi <= lo {
                continue;
            }
            let panels = ((hi - lo) / 0.5).ceil() as usize;
            let h = (hi - lo) / panels as f64;
            for k in 0..panels {
                let u0 = lo + k as f64 * h;
                total += h * rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(z, wt)| {
                        let u = u0 + h * z;
                        wt * (p * ((a + u.exp() * b).ln() - s * u)).exp()
                    })
                    .sum::<f64>();
            }
        }
        let (a_last, _) = parts[levels.len()];
        total += a_last.powf(p) * levels[levels.len() - 1].powf(-s * p) / (s * p);
        total.powf(1.0 / p)
    };
    Ok(norm / (interp_constant(theta, q) * interp_constant(s, p)))
}

pub fn check_reiteration(spectrum: &[f64], theta: f64, q: f64, p: f64, probes: &[Vec<f64>]) -> Result<ReiterationReport> {
    let direct = WeightedCouple::homogeneous(spectrum, -1, 1)?;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for x in probes {
        let d = normalized_interp_norm(&direct, x, 0.5, p)?;
        if d == 0.0 {
            continue;
        }
        let r = reiterated_norm(spectrum, x, theta, q, p)? / d;
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
    }
    Ok(ReiterationReport {
        theta,
        q,
        p,
        min_ratio,
        max_ratio,
        probes: probes.len(),
    })
}


/// Ratio interval `[lo, hi]` of one pair of normalized norms.
#[derive(Clone, Debug, Serialize)]
pub struct RatioInterval {
    pub pair: String,
    pub lo: f64,
    pub hi: f64,
}

/// Everything recorded at one dimension of an [`equivalence_study`].
#[derive(Clone, Debug, Serialize)]
pub struct DimensionRecord {
    pub dim: usize,
    /// `K/R`, `K/S` and `R/S` of the normalized K-functional, resolvent and
    /// semigroup norms.
    pub intervals: Vec<RatioInterval>,
    /// Largest embedding ratio over all chains and models.
    pub embedding_worst: f64,
    pub embedding_passed: bool,
    pub reiteration_lo: f64,
    pub reiteration_hi: f64,
}

/// Interpolation norm equivalences on a family of random diagonal models,
/// repeated at each dimension.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceStudy {
    pub theta: f64,
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub models: usize,
    pub records: Vec<DimensionRecord>,
    /// Largest factor by which any interval endpoint moves between the first
    /// and last dimension (≥ 1).
    pub drift: f64,
    /// Same for the reiteration interval.
    pub reiteration_drift: f64,
}

impl EquivalenceStudy {
    pub fn passed(&self, max_drift: f64) -> bool {
        self.drift < max_drift
            && self.reiteration_drift < max_drift
            && self.records.iter().all(|r| r.embedding_passed)
    }
}

/// Chains `−2 ≤ k < j < m ≤ 2`.
pub fn embedding_chains() -> Vec<(i32, i32, i32)> {
    let mut out = Vec::new();
    for k in -2..=2 {
        for j in k + 1..=2 {
            for m in j + 1..=2 {
                out.push((k, j, m));
            }
        }
    }
    out
}

fn spread(a: f64, b: f64) -> f64 {
    (a / b).max(b / a)
}

/// For each dimension, `models` spectra drawn log-uniformly from `[lo, hi]`
/// (model `i` seeded with `seed + i`) and `probes` Gaussian vectors per model.
/// Records the pairwise ratio intervals of the three `(θ, p)` norms, runs
/// every embedding chain and the reiteration check `(θ, q) = (1/2, 1)`, outer
/// index `p`.
pub fn equivalence_study(
    theta: f64,
    p: f64,
    dims: &[usize],
    models: usize,
    probes: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<EquivalenceStudy> {
    use crate::estimates::{gaussian_vectors, DiagonalModel};
    use rayon::prelude::*;
    check_params(theta, p)?;
    if dims.is_empty() || models == 0 || probes == 0 {
        return Err(Error::Input("equivalence study needs dimensions, models and probes".into()));
    }
    let chains = embedding_chains();
    let mut records = Vec::with_capacity(dims.len());
    for &d in dims {
        let per_model: Vec<([(f64, f64); 3], f64, bool, (f64, f64))> = (0..models)
            .into_par_iter()
            .map(|i| -> Result<_> {
                let s = seed.wrapping_add(i as u64);
                let model = DiagonalModel::random_log_uniform(d, range.0, range.1, &mut crate::probes::rng(s))?;
                let xs = gaussian_vectors(d, probes, s);
                let couple = WeightedCouple::homogeneous(&model.spectrum, 0, 1)?;
                let mut iv = [(f64::INFINITY, 0.0f64); 3];
                for x in &xs {
                    let k = normalized_interp_norm(&couple, x, theta, p)?;
                    let r = super::forms::normalized_resolvent_norm(&model, x, theta, p, 1)?;
                    let sg = super::forms::normalized_semigroup_norm(&model, x, theta, p, 1)?;
                    for (slot, v) in iv.iter_mut().zip([k / r, k / sg, r / sg]) {
                        slot.0 = slot.0.min(v);
                        slot.1 = slot.1.max(v);
                    }
                }
                let mut worst: f64 = 0.0;
                let mut ok = true;
                for &(k, j, m) in &chains {
                    let e = check_embedding_chain(&model.spectrum, k, j, m, &xs)?;
                    worst = worst.max(e.outer_ratio).max(e.inner_ratio);
                    ok &= e.passed;
                }
                let re = check_reiteration(&model.spectrum, 0.5, 1.0, p, &xs)?;
                Ok((iv, worst, ok, (re.min_ratio, re.max_ratio)))
            })
            .collect::<Result<_>>()?;
        let names = ["K/R", "K/S", "R/S"];
        let intervals = (0..3)
            .map(|a| RatioInterval {
                pair: names[a].to_string(),
                lo: per_model.iter().map(|m| m.0[a].0).fold(f64::INFINITY, f64::min),
                hi: per_model.iter().map(|m| m.0[a].1).fold(0.0, f64::max),
            })
            .collect();
        records.push(DimensionRecord {
            dim: d,
            intervals,
            embedding_worst: per_model.iter().map(|m| m.1).fold(0.0, f64::max),
            embedding_passed: per_model.iter().all(|m| m.2),
            reiteration_lo: per_model.iter().map(|m| m.3 .0).fold(f64::INFINITY, f64::min),
            reiteration_hi: per_model.iter().map(|m| m.3 .1).fold(0.0, f64::max),
        });
    }
    let (first, last) = (&records[0], &records[records.len() - 1]);
    let drift = first
        .intervals
        .iter()
        .zip(&last.intervals)
        .map(|(a, b)| spread(a.lo, b.lo).max(spread(a.hi, b.hi)))
        .fold(1.0, f64::max);
    let reiteration_drift =
        spread(first.reiteration_lo, last.reiteration_lo).max(spread(first.reiteration_hi, last.reiteration_hi));
    Ok(EquivalenceStudy {
        theta,
        p,
        models,
        records,
        drift,
        reiteration_drift,
    })
}
