use serde::{Deserialize, Serialize};

use crate::quad::gl16;
use crate::{Error, Result};

/// The couple `(ℓ²(w0), ℓ²(w1))`; `w_i = λ_i^k, λ_i^m` realises `(Ẋ_k, Ẋ_m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedCouple {
    w0: Vec<f64>,
    w1: Vec<f64>,
}

impl WeightedCouple {
    pub fn new(w0: Vec<f64>, w1: Vec<f64>) -> Result<Self> {
        if w0.is_empty() || w0.len() != w1.len() {
            return Err(Error::Input(format!(
                "couple weights must be nonempty and of equal length, got {} and {}",
                w0.len(),
                w1.len()
            )));
        }
        if w0.iter().chain(&w1).any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Domain("couple weights must be positive and finite".into()));
        }
        Ok(Self { w0, w1 })
    }

    /// `(Ẋ_k, Ẋ_m)` over `spectrum`.
    pub fn homogeneous(spectrum: &[f64], k: i32, m: i32) -> Result<Self> {
        Self::new(
            spectrum.iter().map(|l| l.powi(k)).collect(),
            spectrum.iter().map(|l| l.powi(m)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.w0.len()
    }

    pub fn w0(&self) -> &[f64] {
        &self.w0
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Input(format!(
                "vector of length {} for a couple of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// `(Σ_i min(w0_i, t·w1_i)² x_i²)^{1/2}`, equivalent to the K-functional of
/// the `ℓ²` couple up to a factor `√2`.
pub fn k_functional(couple: &WeightedCouple, x: &[f64], t: f64) -> Result<f64> {
    couple.check(x)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("K-functional needs t > 0, got {t}")));
    }
    Ok(couple
        .w0
        .iter()
        .zip(&couple.w1)
        .zip(x)
        .map(|((a, b), v)| (a.min(t * b) * v).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `c(θ, p) = ‖t^{−θ} min(1, t)‖_{L^p(dt/t)} = (θ(1−θ)p)^{−1/p}`, and 1 for `p = ∞`.
pub fn interp_constant(theta: f64, p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (theta * (1.0 - theta) * p).powf(-1.0 / p)
    }
}

pub(crate) fn check_params(theta: f64, p: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("θ must lie in (0, 1), got {theta}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}

/// `‖t^{−θ} K(t, x)‖_{L^p((0,∞), dt/t)}`.
///
/// Between consecutive breakpoints `w0_i/w1_i` the squared K-functional is
/// `A + B t²`; the two tails are pure powers and integrated exactly, the
/// segments by Gauss–Legendre in `ln t`. For `p = ∞` the supremum sits at a
/// breakpoint since `t^{−2θ}(A + B t²)` has no interior maximum.
pub fn real_interp_norm(couple: &WeightedCouple, x: &[f64], theta: f64, p: f64) -> Result<f64> {
    couple.check(x)?;
    check_params(theta, p)?;
    // (breakpoint, w0² x², w1² x²)
    let mut pts: Vec<(f64, f64, f64)> = couple
        .w0
        .iter()
        .zip(&couple.w1)
        .zip(x)
        .filter(|(_, v)| **v != 0.0)
        .map(|((a, b), v)| (a / b, (a * v).powi(2), (b * v).powi(2)))
        .collect();
    if pts.is_empty() {
        return Ok(0.0);
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pts.len();
    // prefix sums of saturated parts and suffix sums of linear parts, so that
    // no cancellation occurs across many decades of weights
    let mut head = vec![0.0; n + 1];
    let mut tail = vec![0.0; n + 1];
    for w in 0..n {
        head[w + 1] = head[w] + pts[w].1;
        tail[n - 1 - w] = tail[n - w] + pts[n - 1 - w].2;
    }
    if p.is_infinite() {
        // K is continuous at a breakpoint; evaluate with that coordinate unsaturated
        return Ok((0..n)
            .map(|w| {
                let t = pts[w].0;
                t.powf(-theta) * (head[w] + tail[w] * t * t).sqrt()
            })
            .fold(0.0, f64::max));
    }
    let f = |a: f64, b: f64, u: f64| -> f64 {
        let t = u.exp();
        (0.5 * p * (a + b * t * t).ln() - theta * p * u).exp()
    };
    let first = pts[0].0;
    let mut total = tail[0].powf(p / 2.0) * first.powf((1.0 - theta) * p) / ((1.0 - theta) * p);
    let rule = gl16();
    for w in 0..n - 1 {
        let (a, b) = (head[w + 1], tail[w + 1]);
        let (lo, hi) = (pts[w].0.ln(), pts[w + 1].0.ln());
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
                .map(|(s, wt)| wt * f(a, b, u0 + h * s))
                .sum::<f64>();
        }
    }
    let last = pts[n - 1].0;
    total += head[n].powf(p / 2.0) * last.powf(-theta * p) / (theta * p);
    Ok(total.powf(1.0 / p))
}

/// [`real_interp_norm`] divided by `c(θ, p)`, so that a single coordinate
/// has norm `w0^{1−θ} w1^θ |x_i|`.
pub fn normalized_interp_norm(couple: &WeightedCouple, x: &[f64], theta: f64, p: f64) -> Result<f64> {
    Ok(real_interp_norm(couple, x, theta, p)? / interp_constant(theta, p))
}
