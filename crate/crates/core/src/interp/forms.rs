use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

use super::couple::check_params;
use crate::estimates::DiagonalModel;
use crate::quad::log_grid;
use crate::{Error, Result};

/// Points per decade of the λ- and t-grids.
pub const PER_DECADE: usize = 64;
/// Decades of margin beyond the spectrum on each side.
pub const MARGIN_DECADES: f64 = 8.0;

fn check(model: &DiagonalModel, x: &[f64], m: u32) -> Result<()> {
    if x.len() != model.dim() {
        return Err(Error::Input(format!(
            "vector of length {} for a model of dimension {}",
            x.len(),
            model.dim()
        )));
    }
    if m == 0 {
        return Err(Error::Domain("m must be a positive integer".into()));
    }
    Ok(())
}

/// Trapezoid sum in `ln s` of `g(s)^p` plus the power-law tails
/// `g ~ s^{lo_power}` below the grid and `g ~ s^{−hi_power}` above it. For
/// `p = ∞` the grid maximum is refined by golden-section search in `ln s`.
fn log_integral(grid: &[f64], eval: impl Fn(f64) -> f64, p: f64, lo_power: f64, hi_power: f64) -> f64 {
    let g: Vec<f64> = grid.iter().map(|&s| eval(s)).collect();
    if p.is_infinite() {
        let (k, best) = g
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (k, v)| if *v > acc.1 { (k, *v) } else { acc });
        let (mut a, mut b) = (grid[k.saturating_sub(1)].ln(), grid[(k + 1).min(grid.len() - 1)].ln());
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let x1 = b - phi * (b - a);
            let x2 = a + phi * (b - a);
            if eval(x1.exp()) < eval(x2.exp()) {
                a = x1;
            } else {
                b = x2;
            }
        }
        return best.max(eval((0.5 * (a + b)).exp()));
    }
    let h = (grid[1] / grid[0]).ln();
    let vals: Vec<f64> = g.iter().map(|v| v.powf(p)).collect();
    let n = vals.len();
    let mut total = h * (vals[1..n - 1].iter().sum::<f64>() + 0.5 * (vals[0] + vals[n - 1]));
    if lo_power > 0.0 {
        total += vals[0] / (lo_power * p);
    }
    if hi_power > 0.0 {
        total += vals[n - 1] / (hi_power * p);
    }
    total.powf(1.0 / p)
}

fn spectral_range(model: &DiagonalModel) -> (f64, f64) {
    let pad = 10f64.powf(MARGIN_DECADES);
    (model.min_eigenvalue() / pad, model.max_eigenvalue() * pad)
}

/// `‖λ ↦ λ^{θm} A^m (λ+A)^{−m} x‖_{L^p(dλ/λ)}` on a log λ-grid.
pub fn resolvent_interp_norm(model: &DiagonalModel, x: &[f64], theta: f64, p: f64, m: u32) -> Result<f64> {
    check(model, x, m)?;
    check_params(theta, p)?;
    let (lo, hi) = spectral_range(model);
    let grid = log_grid(lo, hi, PER_DECADE);
    let mf = m as f64;
    let eval = |l: f64| {
        let s: f64 = model
            .spectrum
            .iter()
            .zip(x)
            .map(|(&li, &xi)| ((li / (l + li)).powi(m as i32) * xi).powi(2))
            .sum();
        l.powf(theta * mf) * s.sqrt()
    };
    Ok(log_integral(&grid, eval, p, theta * mf, (1.0 - theta) * mf))
}

/// `‖t ↦ t^{m(1−θ)} A^m T(t) x‖_{L^p(dt/t)}` on a log t-grid; the large-time
/// side decays exponentially and needs no tail.
pub fn semigroup_interp_norm(model: &DiagonalModel, x: &[f64], theta: f64, p: f64, m: u32) -> Result<f64> {
    check(model, x, m)?;
    check_params(theta, p)?;
    let lo = 10f64.powf(-MARGIN_DECADES) / model.max_eigenvalue();
    let hi = 100.0 / model.min_eigenvalue();
    let grid = log_grid(lo, hi, PER_DECADE);
    let mf = m as f64;
    let eval = |t: f64| {
        let s: f64 = model
            .spectrum
            .iter()
            .zip(x)
            .map(|(&li, &xi)| (li.powi(m as i32) * (-t * li).exp() * xi).powi(2))
            .sum();
        t.powf(mf * (1.0 - theta)) * s.sqrt()
    };
    Ok(log_integral(&grid, eval, p, mf * (1.0 - theta), 0.0))
}

/// Value of [`resolvent_interp_norm`] on `d = 1`, `λ₁ = 1`, `x = 1`:
/// `B(θmp, (1−θ)mp)^{1/p}`, or `(θ^θ(1−θ)^{1−θ})^m` for `p = ∞`.
pub fn resolvent_constant(theta: f64, p: f64, m: u32) -> f64 {
    let mf = m as f64;
    if p.is_infinite() {
        (theta.powf(theta) * (1.0 - theta).powf(1.0 - theta)).powf(mf)
    } else {
        beta(theta * mf * p, (1.0 - theta) * mf * p).powf(1.0 / p)
    }
}

/// Value of [`semigroup_interp_norm`] on `d = 1`, `λ₁ = 1`, `x = 1`:
/// `(Γ(m(1−θ)p) / p^{m(1−θ)p})^{1/p}`, or `(a/e)^a` with `a = m(1−θ)` for `p = ∞`.
pub fn semigroup_constant(theta: f64, p: f64, m: u32) -> f64 {
    let a = m as f64 * (1.0 - theta);
    if p.is_infinite() {
        (a / std::f64::consts::E).powf(a)
    } else {
        (gamma(a * p) / p.powf(a * p)).powf(1.0 / p)
    }
}

/// [`resolvent_interp_norm`] over [`resolvent_constant`]; a coordinate
/// vector `e_i` has norm `λ_i^{θm}`.
pub fn normalized_resolvent_norm(model: &DiagonalModel, x: &[f64], theta: f64, p: f64, m: u32) -> Result<f64> {
    Ok(resolvent_interp_norm(model, x, theta, p, m)? / resolvent_constant(theta, p, m))
}

/// [`semigroup_interp_norm`] over [`semigroup_constant`].
pub fn normalized_semigroup_norm(model: &DiagonalModel, x: &[f64], theta: f64, p: f64, m: u32) -> Result<f64> {
    Ok(semigroup_interp_norm(model, x, theta, p, m)? / semigroup_constant(theta, p, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coordinate_closed_forms() {
        let model = DiagonalModel::from_spectrum(vec![3.0]).unwrap();
        for &(theta, p) in &[(0.3, 1.0), (0.5, 2.0), (0.7, 4.0)] {
            let r = resolvent_interp_norm(&model, &[1.0], theta, p, 1).unwrap();
            let expect = 3f64.powf(theta) * resolvent_constant(theta, p, 1);
            assert!((r - expect).abs() < 1e-6 * expect, "{r} vs {expect}");
            let s = semigroup_interp_norm(&model, &[1.0], theta, p, 1).unwrap();
            let expect = 3f64.powf(theta) * semigroup_constant(theta, p, 1);
            assert!((s - expect).abs() < 1e-6 * expect, "{s} vs {expect}");
        }
    }
}
