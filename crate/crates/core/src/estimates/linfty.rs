use serde::Serialize;

use super::admissibility::hypothesis_constant;
use super::model::DiagonalModel;
use crate::{Error, Result};

/// Outcome of the `L^∞` convolution bound on a diagonal model with `W = ℓ²`
/// and `U` weighted by `u_i`.
#[derive(Clone, Debug, Serialize)]
pub struct LinftyReport {
    /// `max_i u_i/(eλ_i)`.
    pub hypothesis_constant: f64,
    /// `max` over probes of `sup_t ‖∫₀ᵗ T(t−s)w(s)ds‖_U / ‖w‖_{L^∞(W)}`.
    pub constant: f64,
    pub probes: usize,
}

/// Input profiles on `[0, 8/λ]` in units of `1/λ`: `(breakpoints, values)`.
fn profiles() -> Vec<(Vec<f64>, Vec<f64>)> {
    let steps: Vec<f64> = (0..=64).map(|k| k as f64 / 8.0).collect();
    let n = steps.len() - 1;
    let constant = vec![1.0; n];
    let window: Vec<f64> = steps[..n].iter().map(|&s| if s < 1.0 { 1.0 } else { 0.0 }).collect();
    let alternating: Vec<f64> = (0..n).map(|k| if (k / 8) % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let late: Vec<f64> = steps[..n].iter().map(|&s| if s >= 4.0 { 1.0 } else { 0.0 }).collect();
    vec![
        (steps.clone(), constant),
        (steps.clone(), window),
        (steps.clone(), alternating),
        (steps, late),
    ]
}

/// Checks the bound on inputs `w(s) = φ(λ_i s) e_i` with piecewise-constant
/// `φ` and, for each profile, on `w(s) = φ(s) x` for every vector in
/// `vectors`; the convolution is evaluated in closed form at each breakpoint.
///
/// Fails with a hypothesis error when `max_i u_i/(eλ_i)` exceeds `limit`.
pub fn verify_linfty_convolution(
    model: &DiagonalModel,
    u: &[f64],
    vectors: &[Vec<f64>],
    limit: Option<f64>,
) -> Result<LinftyReport> {
    if u.len() != model.dim() {
        return Err(Error::Input("U-weights must match the model dimension".into()));
    }
    let hyp = hypothesis_constant(&model.spectrum, u);
    if let Some(limit) = limit {
        if hyp > limit {
            return Err(Error::Hypothesis(format!(
                "sup_t t‖T(t)‖_(W->U) = {hyp:.4e} exceeds the limit {limit:.4e}"
            )));
        }
    }
    let profiles = profiles();
    let mut constant: f64 = 0.0;
    let mut count = 0;
    for (&l, &w) in model.spectrum.iter().zip(u) {
        for (steps, vals) in &profiles {
            let mut state = 0.0;
            let mut sup: f64 = 0.0;
            for (k, &v) in vals.iter().enumerate() {
                let decay = (-(steps[k + 1] - steps[k])).exp();
                state = state * decay + v * (1.0 - decay) / l;
                sup = sup.max(state.abs());
            }
            constant = constant.max(w * sup);
            count += 1;
        }
    }
    // vector probes share one profile in absolute time, scaled by 1/λ_min
    let scale = 1.0 / model.min_eigenvalue();
    for x in vectors {
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx == 0.0 {
            continue;
        }
        for (steps, vals) in &profiles {
            let mut state = vec![0.0; model.dim()];
            let mut sup: f64 = 0.0;
            for (k, &v) in vals.iter().enumerate() {
                let h = (steps[k + 1] - steps[k]) * scale;
                let mut acc = 0.0;
                for (j, s) in state.iter_mut().enumerate() {
                    let l = model.spectrum[j];
                    let decay = (-l * h).exp();
                    *s = *s * decay + v * x[j] * (1.0 - decay) / l;
                    acc += (u[j] * *s).powi(2);
                }
                sup = sup.max(acc.sqrt());
            }
            constant = constant.max(sup / nx);
            count += 1;
        }
    }
    Ok(LinftyReport {
        hypothesis_constant: hyp,
        constant,
        probes: count,
    })
}
