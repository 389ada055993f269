use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::TimeGrid;
use crate::quad::GaussLegendre;
use crate::spaces::SpaceTag;
use crate::{Error, Result};

/// `L^p_α((0, τ), Z)` with `Z` named by `space`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedTimeNorm {
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    pub space: SpaceTag,
}

impl WeightedTimeNorm {
    pub fn new(p: f64, alpha: f64, space: SpaceTag) -> Self {
        Self { p, alpha, space }
    }

    /// `α + 1/p`, the time-scaling index of the norm.
    pub fn index(&self) -> f64 {
        self.alpha + 1.0 / self.p
    }

    /// Checks `α ≥ 0` and `α + 1/p ∈ (0, 1/2)`.
    pub fn validate_fixed_point(&self) -> Result<()> {
        if !(self.p >= 1.0) || !(self.alpha >= 0.0) {
            return Err(Error::Domain(format!(
                "need p >= 1 and alpha >= 0, got p = {}, alpha = {}",
                self.p, self.alpha
            )));
        }
        let s = self.index();
        if s > 0.0 && s < 0.5 {
            Ok(())
        } else {
            Err(Error::Domain(format!("alpha + 1/p = {s} outside (0, 1/2)")))
        }
    }
}

fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

fn check_values(values: &[f64], grid: &TimeGrid) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::Input(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    if let Some((j, v)) = values
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(Error::Domain(format!("value {v} at node {j} is negative or not finite")));
    }
    Ok(())
}

/// `∫ H dt` over intervals `[t_j, t_{j+1}]` for `j ≥ from`, where
/// `ln H_j = lh[j] + shift`. The first interval `[0, t_1]` uses a power law
/// through nodes 1 and 2; the others interpolate `ln H` quadratically in `ln t`
/// and integrate with Gauss–Legendre in `ln t`, falling back to the trapezoid
/// rule where a stencil value vanishes. Pure powers are integrated exactly up
/// to round-off. The first-cell closure is not monotone in the node values
/// when `t^α g` is close to the integrability edge `t^{−1/p}`.
fn integrate(lh: &[f64], t: &[f64], from: usize) -> f64 {
    let m = t.len() - 1;
    let mut total = 0.0;
    if from == 0 {
        let (h1, h2) = (lh[1].exp(), lh[2].exp());
        total += if h1 > 0.0 && h2 > 0.0 {
            let kappa = (lh[2] - lh[1]) / (t[2] / t[1]).ln();
            if kappa <= -1.0 {
                return f64::INFINITY;
            }
            t[1] * h1 / (kappa + 1.0)
        } else {
            0.5 * t[1] * h1
        };
    }
    let rule = gl8();
    for j in from.max(1)..m {
        let stencil = if m < 3 {
            None
        } else if j >= 2 {
            Some([j - 1, j, j + 1])
        } else {
            Some([1, 2, 3])
        };
        let (a, b) = (t[j], t[j + 1]);
        let positive = stencil.map_or(false, |s| s.iter().all(|&i| lh[i] > f64::NEG_INFINITY));
        if !positive {
            if m < 3 && lh[j] > f64::NEG_INFINITY && lh[j + 1] > f64::NEG_INFINITY {
                // power law between the two endpoints
                let kappa = (lh[j + 1] - lh[j]) / (b / a).ln();
                let e = kappa + 1.0;
                let h = lh[j].exp() * a;
                total += if e.abs() < 1e-12 {
                    h * (b / a).ln()
                } else {
                    h * ((b / a).powf(e) - 1.0) / e
                };
            } else {
                total += 0.5 * (b - a) * (lh[j].exp() + lh[j + 1].exp());
            }
            continue;
        }
        let s = stencil.unwrap();
        let u: [f64; 3] = [t[s[0]].ln(), t[s[1]].ln(), t[s[2]].ln()];
        let y: [f64; 3] = [lh[s[0]], lh[s[1]], lh[s[2]]];
        let (ua, ub) = (a.ln(), b.ln());
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = ua + (ub - ua) * x;
            let l0 = (v - u[1]) * (v - u[2]) / ((u[0] - u[1]) * (u[0] - u[2]));
            let l1 = (v - u[0]) * (v - u[2]) / ((u[1] - u[0]) * (u[1] - u[2]));
            let l2 = (v - u[0]) * (v - u[1]) / ((u[2] - u[0]) * (u[2] - u[1]));
            acc += w * (l0 * y[0] + l1 * y[1] + l2 * y[2] + v).exp();
        }
        total += acc * (ub - ua);
    }
    total
}

fn weighted(values: &[f64], p: f64, alpha: f64, grid: &TimeGrid, from: usize) -> Result<f64> {
    check_values(values, grid)?;
    if !(p > 0.0) {
        return Err(Error::Domain(format!("time exponent must be positive, got {p}")));
    }
    let t = grid.nodes();
    if p.is_infinite() {
        return Ok(t
            .iter()
            .zip(values)
            .skip(from.max(1))
            .map(|(&s, &g)| if g == 0.0 { 0.0 } else { s.powf(alpha) * g })
            .fold(0.0, f64::max));
    }
    let mut lh: Vec<f64> = t
        .iter()
        .zip(values)
        .map(|(&s, &g)| p * (alpha * s.ln() + g.ln()))
        .collect();
    lh[0] = f64::NEG_INFINITY;
    let shift = lh
        .iter()
        .skip(1)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    for v in lh.iter_mut() {
        *v -= shift;
    }
    let integral = integrate(&lh, t, from);
    Ok((shift / p).exp() * integral.powf(1.0 / p))
}

/// `‖t ↦ t^α g(t)‖_{L^p(0, τ)}` from node values `g(t_j)`; `values[0]` is ignored.
pub fn weighted_time_norm(values: &[f64], norm: &WeightedTimeNorm, grid: &TimeGrid) -> Result<f64> {
    weighted(values, norm.p, norm.alpha, grid, 0)
}

/// Share of the norm carried by the last dyadic block `[τ/2, τ]`: the ratio of
/// the norm restricted to nodes `t_j ≥ τ/2` to the full norm.
pub fn dyadic_tail(values: &[f64], p: f64, alpha: f64, grid: &TimeGrid) -> Result<f64> {
    let total = weighted(values, p, alpha, grid, 0)?;
    if total == 0.0 {
        return Ok(0.0);
    }
    let half = grid.tau() / 2.0;
    let from = grid.nodes().iter().position(|&t| t >= half).unwrap_or(grid.intervals());
    Ok(weighted(values, p, alpha, grid, from.max(1))? / total)
}
