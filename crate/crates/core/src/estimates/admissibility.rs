use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::hardy::{hardy_littlewood_bound_probe, HlProbeReport, Verdict};
use super::model::DiagonalModel;
use crate::interp::{normalized_interp_norm, WeightedCouple};
use crate::quad::{gl16, log_grid};
use crate::{Error, Result};

/// Points per decade for the λ- and t-grids of this module.
pub const GRID_PER_DECADE: usize = 64;
/// Decades added beyond the spectrum on each side of the λ-grid.
pub const LAMBDA_MARGIN: f64 = 4.0;

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

fn norm2(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

/// `sup_λ λ^{1−θ} max_i c_i/(λ + λ_i)`, `θ = α + 1/p`, over a log λ-grid
/// spanning the spectrum with [`LAMBDA_MARGIN`] decades on each side.
pub fn resolvent_family_bound(model: &DiagonalModel, alpha: f64, p: f64) -> Result<f64> {
    let theta = alpha + inv(p);
    if !(theta >= 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("α + 1/p must lie in [0, 1), got {theta}")));
    }
    let pad = 10f64.powf(LAMBDA_MARGIN);
    let grid = log_grid(model.min_eigenvalue() / pad, model.max_eigenvalue() * pad, GRID_PER_DECADE);
    Ok(grid
        .iter()
        .map(|&l| {
            let m = model
                .spectrum
                .iter()
                .zip(&model.obs)
                .map(|(li, c)| c / (l + li))
                .fold(0.0, f64::max);
            l.powf(1.0 - theta) * m
        })
        .fold(0.0, f64::max))
}

/// Maximum of a unimodal `f` on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    f(0.5 * (a + b))
}

/// `‖t ↦ t^α ‖C T(t) x‖‖_{L^p(0,∞)}` on a log t-grid with the small-time
/// power tail added exactly.
pub fn trajectory_norm(model: &DiagonalModel, x: &[f64], alpha: f64, p: f64) -> Result<f64> {
    if x.len() != model.dim() {
        return Err(Error::Input("probe length does not match the model".into()));
    }
    let support: Vec<(f64, f64)> = model
        .spectrum
        .iter()
        .zip(&model.obs)
        .zip(x)
        .filter(|(_, v)| **v != 0.0)
        .map(|((l, c), v)| (*l, c * v))
        .collect();
    if support.is_empty() || support.iter().all(|s| s.1 == 0.0) {
        return Ok(0.0);
    }
    let lmax = support.iter().map(|s| s.0).fold(0.0, f64::max);
    let lmin = support.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let grid = log_grid(1e-6 / lmax, 50.0 / lmin, GRID_PER_DECADE);
    let g: Vec<f64> = grid
        .iter()
        .map(|&t| t.powf(alpha) * norm2(support.iter().map(|(l, cv)| cv * (-t * l).exp())))
        .collect();
    if p.is_infinite() {
        let value = |t: f64| t.powf(alpha) * norm2(support.iter().map(|(l, cv)| cv * (-t * l).exp()));
        let (k, _) = g
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (k, v)| if *v > best.1 { (k, *v) } else { best });
        let lo = grid[k.saturating_sub(1)].ln();
        let hi = grid[(k + 1).min(grid.len() - 1)].ln();
        return Ok(golden_max(|u| value(u.exp()), lo, hi).max(g[k]));
    }
    let h = (grid[1] / grid[0]).ln();
    let vals: Vec<f64> = grid.iter().zip(&g).map(|(t, v)| t * v.powf(p)).collect();
    let n = vals.len();
    let mut total = h * (vals[1..n - 1].iter().sum::<f64>() + 0.5 * (vals[0] + vals[n - 1]));
    // below the grid t^{αp}‖Cx‖^p up to e^{−tλ} ≈ 1
    total += vals[0] / (alpha * p + 1.0);
    Ok(total.powf(1.0 / p))
}

/// The three quantities compared for an observation operator `C` at `(p, α)`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityA1 {
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    /// `max_x ‖t^α C T(t)x‖_{L^p} / ‖x‖`.
    pub trajectory: f64,
    /// `max_x ‖Cx‖ / ‖x‖_{(X,Ẋ_1)_{α+1/p,1}}` with the normalized norm.
    pub interpolation: f64,
    /// [`resolvent_family_bound`].
    pub resolvent: f64,
}

impl AdmissibilityA1 {
    pub fn lhs(&self) -> f64 {
        self.trajectory
    }

    pub fn rhs(&self) -> f64 {
        self.interpolation
    }
}

pub fn admissibility_a1(model: &DiagonalModel, p: f64, alpha: f64, probes: &[Vec<f64>]) -> Result<AdmissibilityA1> {
    let theta = alpha + inv(p);
    if !(theta > 0.0 && theta < 0.5) {
        return Err(Error::Domain(format!("α + 1/p must lie in (0, 1/2), got {theta}")));
    }
    let couple = WeightedCouple::homogeneous(&model.spectrum, 0, 1)?;
    let mut trajectory: f64 = 0.0;
    let mut interpolation: f64 = 0.0;
    for x in probes {
        let nx = norm2(x.iter().cloned());
        if nx == 0.0 {
            continue;
        }
        trajectory = trajectory.max(trajectory_norm(model, x, alpha, p)? / nx);
        let cx = norm2(model.obs.iter().zip(x).map(|(c, v)| c * v));
        if cx > 0.0 {
            interpolation = interpolation.max(cx / normalized_interp_norm(&couple, x, theta, 1.0)?);
        }
    }
    Ok(AdmissibilityA1 {
        p,
        alpha,
        trajectory,
        interpolation,
        resolvent: resolvent_family_bound(model, alpha, p)?,
    })
}

/// `c_i (Γ(αp+1) / (pλ_i)^{αp+1})^{1/p}`: the trajectory norm of `e_i`.
pub fn coordinate_trajectory_norm(lambda: f64, c: f64, alpha: f64, p: f64) -> f64 {
    if p.is_infinite() {
        if alpha == 0.0 {
            c
        } else {
            c * (alpha / (std::f64::consts::E * lambda)).powf(alpha)
        }
    } else {
        c * (gamma(alpha * p + 1.0) / (p * lambda).powf(alpha * p + 1.0)).powf(1.0 / p)
    }
}

/// `sup_τ (∫₀^τ σ^{−2αr'} e^{−r'(τ−σ)} dσ)^{1/r'}`, `r = p/2`: the norm of
/// `u ↦ ∫₀^τ e^{−(τ−σ)} u(σ) dσ` from `L^r_{2α}` to `L^∞` at `λ = 1`.
pub fn control_kernel_constant(alpha: f64, p: f64) -> Result<f64> {
    let r = p / 2.0;
    if !(r > 1.0) {
        return Err(Error::Domain(format!("control estimate needs p > 2, got {p}")));
    }
    let rp = if r.is_infinite() { 1.0 } else { r / (r - 1.0) };
    let c = 2.0 * alpha * rp;
    if !(c < 1.0 && alpha >= 0.0) {
        return Err(Error::Domain(format!("weight σ^(-{c}) is not integrable")));
    }
    // σ = τ v^{1/(1−c)} removes the singularity at 0
    let e = 1.0 / (1.0 - c);
    let rule = gl16();
    let value = |tau: f64| -> f64 {
        let mut total = 0.0;
        let mut lo = 0.0;
        let mut width = 0.5;
        while lo < 1.0 - 1e-15 {
            let hi = if width < 1e-14 { 1.0 } else { lo + width };
            for (z, w) in rule.nodes.iter().zip(&rule.weights) {
                let v = lo + (hi - lo) * z;
                total += (hi - lo) * w * (-rp * tau * (1.0 - v.powf(e))).exp();
            }
            lo = hi;
            width *= 0.5;
        }
        (tau.powf(1.0 - c) * e * total).powf(1.0 / rp)
    };
    // golden-section search in ln τ
    let (mut a, mut b) = ((1e-4f64).ln(), (1e4f64).ln());
    let scan = log_grid(1e-4, 1e4, 8);
    let best = scan
        .iter()
        .cloned()
        .max_by(|x, y| value(*x).total_cmp(&value(*y)))
        .unwrap();
    if best > 1e-4 && best < 1e4 {
        a = (best / 3.0).ln();
        b = (best * 3.0).ln();
    }
    Ok(golden_max(|u| value(u.exp()), a, b).max(value(best)))
}

/// Control operator `B` at `(p, α)`: the convolution bound
/// `L^{p/2}_{2α}(W) → L^∞(X)` against the embedding of `B` into
/// `(Ẋ_{−1}, X)_{2(α+1/p),∞}`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityA2 {
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    /// `max_i b_i λ_i^{2α − 1/r'} K`.
    pub convolution: f64,
    /// `max_x ‖Bx‖_{(Ẋ_{−1},X)_{θ,∞}} / ‖x‖`, normalized norm.
    pub interpolation: f64,
}

impl AdmissibilityA2 {
    pub fn lhs(&self) -> f64 {
        self.convolution
    }

    pub fn rhs(&self) -> f64 {
        self.interpolation
    }
}

/// The convolution side uses the dual formula: for diagonal `B` the supremum
/// over inputs `u(σ) e_i` is attained coordinatewise and equals
/// `b_i ‖σ ↦ e^{−λ_i(τ−σ)} σ^{−2α}‖_{L^{r'}(0,τ)}` maximised over `τ`, which
/// scales to `b_i λ_i^{2α−1/r'}` times [`control_kernel_constant`].
pub fn admissibility_a2(model: &DiagonalModel, p: f64, alpha: f64, probes: &[Vec<f64>]) -> Result<AdmissibilityA2> {
    let theta = 2.0 * (alpha + inv(p));
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("2(α + 1/p) must lie in (0, 1), got {theta}")));
    }
    let k = control_kernel_constant(alpha, p)?;
    let r = p / 2.0;
    let inv_rp = 1.0 - inv(r);
    let convolution = model
        .spectrum
        .iter()
        .zip(&model.ctrl)
        .map(|(l, b)| b * l.powf(2.0 * alpha - inv_rp) * k)
        .fold(0.0, f64::max);
    let couple = WeightedCouple::homogeneous(&model.spectrum, -1, 0)?;
    let mut interpolation: f64 = 0.0;
    for x in probes {
        let nx = norm2(x.iter().cloned());
        if nx == 0.0 {
            continue;
        }
        let bx: Vec<f64> = model.ctrl.iter().zip(x).map(|(b, v)| b * v).collect();
        if bx.iter().all(|v| *v == 0.0) {
            continue;
        }
        interpolation = interpolation.max(normalized_interp_norm(&couple, &bx, theta, f64::INFINITY)? / nx);
    }
    Ok(AdmissibilityA2 {
        p,
        alpha,
        convolution,
        interpolation,
    })
}

/// Measured convolution `‖∫₀^τ e^{−λ(τ−σ)} u(σ) dσ‖_{L^∞} / ‖σ^{2α} u‖_{L^r}`
/// for a piecewise-constant `u` given on `edges` (length `values.len() + 1`).
pub fn piecewise_control_ratio(lambda: f64, alpha: f64, p: f64, edges: &[f64], values: &[f64]) -> f64 {
    let r = p / 2.0;
    let mut state = 0.0;
    let mut sup: f64 = 0.0;
    for (k, &v) in values.iter().enumerate() {
        let h = edges[k + 1] - edges[k];
        let decay = (-lambda * h).exp();
        state = state * decay + v * (1.0 - decay) / lambda;
        sup = sup.max(state.abs());
    }
    let rule = gl16();
    let den = if r.is_infinite() {
        edges[1..]
            .iter()
            .zip(values)
            .map(|(t, v)| t.powf(2.0 * alpha) * v.abs())
            .fold(0.0, f64::max)
    } else {
        let mut total = 0.0;
        for (k, &v) in values.iter().enumerate() {
            let (a, b) = (edges[k], edges[k + 1]);
            for (z, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = a + (b - a) * z;
                total += (b - a) * w * (s.powf(2.0 * alpha) * v.abs()).powf(r);
            }
        }
        total.powf(1.0 / r)
    };
    sup / den
}

/// Composite check of the convolution estimate `L^{q_in}_β(W) → L^p_α(Z)`
/// when `‖C T(t) B‖ ≤ c t^{−γ}`: the exponent identity plus the
/// Hardy–Littlewood probe run at the measured `γ`.
#[derive(Clone, Debug, Serialize)]
pub struct A3Report {
    pub gamma_measured: f64,
    pub gamma_required: f64,
    pub identity_ok: bool,
    pub hardy_littlewood: HlProbeReport,
    pub bounded: bool,
}

/// Tolerance on `|γ_measured − γ_required|`.
pub const GAMMA_TOL: f64 = 0.05;

pub fn verify_a3_convolution(gamma_measured: f64, q_in: f64, beta: f64, p: f64, alpha: f64) -> Result<A3Report> {
    let gamma_required = 1.0 + alpha + inv(p) - beta - inv(q_in);
    let identity_ok = (gamma_measured - gamma_required).abs() <= GAMMA_TOL;
    let hardy_littlewood = hardy_littlewood_bound_probe(q_in, beta, p, alpha, gamma_measured)?;
    let bounded = identity_ok && hardy_littlewood.verdict == Verdict::Stable;
    Ok(A3Report {
        gamma_measured,
        gamma_required,
        identity_ok,
        hardy_littlewood,
        bounded,
    })
}

/// Observation weights `λ^σ` on the model.
pub fn critical_observation(model: &DiagonalModel, alpha: f64, p: f64, excess: f64) -> DiagonalModel {
    model.clone().with_obs_power(alpha + inv(p) + excess)
}

/// Control weights `λ^{1−2(α+1/p)+excess}`.
pub fn critical_control(model: &DiagonalModel, alpha: f64, p: f64, excess: f64) -> DiagonalModel {
    model.clone().with_ctrl_power(1.0 - 2.0 * (alpha + inv(p)) + excess)
}

/// `max_i c_i / (eλ_i)`: the smallest `c` with `‖T(t)‖_{W→U} ≤ c/t` when
/// `U` carries the weights `u_i`.
pub fn hypothesis_constant(spectrum: &[f64], u: &[f64]) -> f64 {
    spectrum
        .iter()
        .zip(u)
        .map(|(l, w)| w / (std::f64::consts::E * l))
        .fold(0.0, f64::max)
}

/// Which admissibility condition a doubling study measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    A1,
    A2,
}

/// Quantities of one condition at one model dimension.
#[derive(Clone, Debug, Serialize)]
pub struct DoublingRow {
    pub dim: usize,
    /// Named quantities in a fixed order: `trajectory, interpolation,
    /// resolvent` for A1, `convolution, interpolation` for A2.
    pub values: Vec<(String, f64)>,
}

/// A condition tracked across model dimensions on the geometric ladder.
#[derive(Clone, Debug, Serialize)]
pub struct DoublingStudy {
    pub condition: Condition,
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    pub excess: f64,
    pub rows: Vec<DoublingRow>,
    /// Per quantity, value at the largest dimension over value at the smallest.
    pub growth: Vec<(String, f64)>,
}

impl DoublingStudy {
    /// Every quantity stays within `drift` of its first value.
    pub fn jointly_finite(&self, drift: f64) -> bool {
        self.growth.iter().all(|(_, g)| g.is_finite() && *g < drift && *g > 1.0 / drift)
    }

    /// Every quantity grows by more than `drift`.
    pub fn jointly_divergent(&self, drift: f64) -> bool {
        self.growth.iter().all(|(_, g)| !(*g <= drift))
    }
}

/// Runs the condition with critical weights (plus `excess`) on
/// [`DiagonalModel::geometric`] at each dimension in `dims`.
pub fn admissibility_doubling(
    condition: Condition,
    alpha: f64,
    p: f64,
    excess: f64,
    dims: &[usize],
    random_probes: usize,
    seed: u64,
) -> Result<DoublingStudy> {
    if dims.len() < 2 {
        return Err(Error::Input("a doubling study needs at least two dimensions".into()));
    }
    let mut rows = Vec::with_capacity(dims.len());
    for &d in dims {
        let base = DiagonalModel::geometric(d)?;
        let probes = super::probes::diagonal_probes(d, random_probes, seed);
        let values = match condition {
            Condition::A1 => {
                let r = admissibility_a1(&critical_observation(&base, alpha, p, excess), p, alpha, &probes)?;
                vec![
                    ("trajectory".to_string(), r.trajectory),
                    ("interpolation".to_string(), r.interpolation),
                    ("resolvent".to_string(), r.resolvent),
                ]
            }
            Condition::A2 => {
                let r = admissibility_a2(&critical_control(&base, alpha, p, excess), p, alpha, &probes)?;
                vec![
                    ("convolution".to_string(), r.convolution),
                    ("interpolation".to_string(), r.interpolation),
                ]
            }
        };
        rows.push(DoublingRow { dim: d, values });
    }
    let first = &rows[0].values;
    let last = &rows[rows.len() - 1].values;
    let growth = first
        .iter()
        .zip(last)
        .map(|((name, a), (_, b))| (name.clone(), b / a))
        .collect();
    Ok(DoublingStudy {
        condition,
        p,
        alpha,
        excess,
        rows,
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_constant_at_zero_weight() {
        // α = 0, p = ∞: sup_τ ∫₀^τ e^{−(τ−σ)} dσ = 1
        let k = control_kernel_constant(0.0, f64::INFINITY).unwrap();
        assert!((k - 1.0).abs() < 1e-6, "{k}");
    }
}
