use serde::{Deserialize, Serialize};

use crate::quad::gl16;
use crate::time::TimeGrid;
use crate::{Error, Result};

/// Local interpolation used by the product-integration rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// Piecewise-linear through the interval endpoints, node 0 included:
    /// exact for piecewise-linear data that is finite at the origin.
    Linear,
    /// Four-point Lagrange cubic.
    #[default]
    Cubic,
}

/// Product-integration weights for `(T_γ f)(t_j) = ∫₀^{t_j} f(s)(t_j − s)^{−γ} ds`.
///
/// On each interval `f` is replaced by a Lagrange polynomial. The cubic
/// stencil draws its nodes from indices `[1, j]` and never uses node 0, so
/// `f` may be singular at the origin. Interior intervals are integrated by 16-point Gauss–Legendre,
/// the last one by exact moments of `v^{−γ}`.
#[derive(Clone, Debug)]
pub struct HardyLittlewood {
    gamma: f64,
    rows: Vec<Vec<f64>>,
}

fn lagrange(nodes: &[f64], a: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(b, _)| b != a)
        .map(|(_, &xb)| (x - xb) / (nodes[a] - xb))
        .product()
}

/// Coefficients in `v` of `Π_{b≠a} (v − v_b)/(v_a − v_b)`.
fn lagrange_coefficients(nodes: &[f64], a: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for (b, &vb) in nodes.iter().enumerate() {
        if b == a {
            continue;
        }
        let den = nodes[a] - vb;
        let mut next = vec![0.0; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c / den;
            next[k] -= c * vb / den;
        }
        poly = next;
    }
    poly
}

impl HardyLittlewood {
    pub fn new(grid: &TimeGrid, gamma: f64, stencil: Stencil) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Domain(format!("kernel exponent must lie in (0, 1), got {gamma}")));
        }
        let t = grid.nodes();
        let width = match stencil {
            Stencil::Linear => 2,
            Stencil::Cubic => 4,
        };
        let rule = gl16();
        let mut rows = Vec::with_capacity(t.len());
        rows.push(Vec::new());
        for j in 1..t.len() {
            let mut row = vec![0.0; j + 1];
            let tj = t[j];
            let w = match stencil {
                Stencil::Linear => 2,
                Stencil::Cubic => width.min(j),
            };
            for i in 0..j {
                let start = match stencil {
                    Stencil::Linear => i,
                    // inside [1, j]
                    Stencil::Cubic => i.saturating_sub(1).max(1).min(j + 1 - w),
                };
                let idx: Vec<usize> = (start..start + w).collect();
                let (a, b) = (t[i], t[i + 1]);
                let h = b - a;
                if i + 1 < j {
                    let xs: Vec<f64> = idx.iter().map(|&k| t[k]).collect();
                    for (node, wt) in rule.nodes.iter().zip(&rule.weights) {
                        let s = a + h * node;
                        let kern = h * wt * (tj - s).powf(-gamma);
                        for (m, &k) in idx.iter().enumerate() {
                            row[k] += kern * lagrange(&xs, m, s);
                        }
                    }
                } else {
                    // s = t_j − h v, v ∈ [0, 1]
                    let vs: Vec<f64> = idx.iter().map(|&k| (tj - t[k]) / h).collect();
                    let scale = h.powf(1.0 - gamma);
                    for (m, &k) in idx.iter().enumerate() {
                        let coeffs = lagrange_coefficients(&vs, m);
                        let moment: f64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(p, c)| c / (p as f64 + 1.0 - gamma))
                            .sum();
                        row[k] += scale * moment;
                    }
                }
            }
            rows.push(row);
        }
        Ok(Self { gamma, rows })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `T_γ f` at every node; the value at `t_0 = 0` is 0.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.rows.len() {
            return Err(Error::Input(format!(
                "{} samples for a grid with {} nodes",
                f.len(),
                self.rows.len()
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(f).map(|(w, v)| w * v).sum())
            .collect())
    }
}

/// One-shot [`HardyLittlewood::apply`] with the cubic stencil.
pub fn hardy_littlewood_apply(f: &[f64], gamma: f64, grid: &TimeGrid) -> Result<Vec<f64>> {
    HardyLittlewood::new(grid, gamma, Stencil::Cubic)?.apply(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unbounded,
    Inconclusive,
}

/// Growth below this factor under the extension protocol counts as bounded.
pub const STABLE_GROWTH: f64 = 2.0;
/// Growth above this factor counts as unbounded.
pub const UNBOUNDED_GROWTH: f64 = 10.0;

pub fn classify(growth: f64) -> Verdict {
    if growth < STABLE_GROWTH {
        Verdict::Stable
    } else if growth > UNBOUNDED_GROWTH {
        Verdict::Unbounded
    } else {
        Verdict::Inconclusive
    }
}

/// Scale of the finest probe at each extension step. The base step already
/// carries two decades of power law.
pub const EXTENSION_SCALES: [f64; 5] = [1e-2, 1e-5, 1e-8, 1e-11, 1e-14];

#[derive(Clone, Debug, Serialize)]
pub struct HlProbeReport {
    #[serde(with = "crate::exponent")]
    pub q: f64,
    pub beta: f64,
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// `1 + α − β − γ − (1/q − 1/p)`.
    pub scaling_residual: f64,
    pub scaling_ok: bool,
    /// Running supremum of the ratio after each extension step.
    pub ratio_sup: Vec<f64>,
    pub growth: f64,
    pub verdict: Verdict,
}

/// `‖t^α g‖_{L^p(dt)}` from node samples, trapezoid in `ln t` over the
/// positive nodes; the maximum of `t^α |g|` for `p = ∞`.
fn weighted_norm(t: &[f64], g: &[f64], p: f64, alpha: f64) -> f64 {
    let vals: Vec<f64> = t[1..]
        .iter()
        .zip(&g[1..])
        .map(|(s, v)| s.powf(alpha) * v.abs())
        .collect();
    if p.is_infinite() {
        return vals.iter().cloned().fold(0.0, f64::max);
    }
    let mut total = 0.0;
    for k in 0..vals.len() - 1 {
        let (a, b) = (t[k + 1], t[k + 2]);
        total += 0.5 * (b / a).ln() * (a * vals[k].powf(p) + b * vals[k + 1].powf(p));
    }
    total.powf(1.0 / p)
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

/// Probes at scale `δ`: a bump supported on `[δ, 4δ]` in `ln s`, and the
/// power `s^a` cut off smoothly to `[δ, 1]`.
fn probes_at(delta: f64, a: f64) -> [Box<dyn Fn(f64) -> f64>; 2] {
    let ld = delta.ln();
    let bump = move |s: f64| {
        let u = (s.ln() - ld) / 4f64.ln();
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            (-1.0 / (u * (1.0 - u))).exp()
        }
    };
    let power = move |s: f64| {
        let lo = smoothstep((s.ln() - ld) / 2f64.ln());
        let hi = smoothstep(-s.ln() / 2f64.ln() + 1.0);
        s.powf(a) * lo * hi
    };
    [Box::new(bump), Box::new(power)]
}

/// `1 + α − β − γ − (1/q − 1/p)`, zero on the scaling line of the
/// Hardy–Littlewood bound `L^q_β → L^p_α`.
pub fn hl_scaling_residual(q: f64, beta: f64, p: f64, alpha: f64, gamma: f64) -> f64 {
    1.0 + alpha - beta - gamma - (1.0 / q - 1.0 / p)
}

/// Ratio `‖T_γ f‖_{L^p_α} / ‖f‖_{L^q_β}` over probes pushed toward `s = 0`
/// along [`EXTENSION_SCALES`], on a geometric grid `[1e-16, 1e4]`.
pub fn hardy_littlewood_bound_probe(q: f64, beta: f64, p: f64, alpha: f64, gamma: f64) -> Result<HlProbeReport> {
    if !(q >= 1.0 && p >= 1.0) {
        return Err(Error::Domain("integrability indices must be >= 1".into()));
    }
    let grid = TimeGrid::geometric(1e-16, 1e4, 64)?;
    let hl = HardyLittlewood::new(&grid, gamma, Stencil::Cubic)?;
    let t = grid.nodes();
    let residual = hl_scaling_residual(q, beta, p, alpha, gamma);
    let a = -beta - 1.0 / q + 0.05;
    let mut sup: f64 = 0.0;
    let mut ratio_sup = Vec::with_capacity(EXTENSION_SCALES.len());
    for &delta in &EXTENSION_SCALES {
        for probe in probes_at(delta, a).iter() {
            let f: Vec<f64> = t.iter().map(|&s| if s > 0.0 { probe(s) } else { 0.0 }).collect();
            let tf = hl.apply(&f)?;
            let den = weighted_norm(t, &f, q, beta);
            if den > 0.0 {
                sup = sup.max(weighted_norm(t, &tf, p, alpha) / den);
            }
        }
        ratio_sup.push(sup);
    }
    let growth = ratio_sup[ratio_sup.len() - 1] / ratio_sup[0];
    Ok(HlProbeReport {
        q,
        beta,
        p,
        alpha,
        gamma,
        scaling_residual: residual,
        scaling_ok: residual.abs() < 1e-12,
        ratio_sup,
        growth,
        verdict: classify(growth),
    })
}
