use rustfft::num_complex::Complex64;

use crate::spectral::{fft, Grid, SpectralField};
use crate::{Error, Result};

/// Squared periodic (minimum-image) distance from the origin to grid point `flat`.
fn periodic_dist_sq(grid: &Grid, flat: usize) -> f64 {
    let idx = grid.unflatten(flat);
    let h = grid.spacing();
    (0..grid.n)
        .map(|a| {
            let i = idx[a].min(grid.modes - idx[a]) as f64 * h;
            i * i
        })
        .sum()
}

/// Morrey norm of magnitude samples: the maximum over grid-point centres and
/// radii `r = 2π·2^{−m}`, `m = 0..=log₂N`, of `r^λ (mean of |f|^q over the open
/// ball)^{1/q}`.
pub fn morrey_norm_of_samples(grid: Grid, samples: &[f64], q: f64, lambda: f64) -> Result<f64> {
    if !(q >= 1.0) || q.is_infinite() {
        return Err(Error::Domain(format!("Morrey integrability must be finite and >= 1, got {q}")));
    }
    let top = grid.n as f64 / q;
    if !(lambda > 0.0 && lambda <= top + 1e-15) {
        return Err(Error::Domain(format!(
            "Morrey exponent must lie in (0, {top}], got {lambda}"
        )));
    }
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(0.0);
    }
    let mut power: Vec<Complex64> = samples
        .iter()
        .map(|v| Complex64::new((v.abs() / peak).powf(q), 0.0))
        .collect();
    fft::forward(&grid, &mut power);
    let dist: Vec<f64> = (0..grid.len()).map(|i| periodic_dist_sq(&grid, i)).collect();
    let levels = (usize::BITS - 1 - grid.modes.leading_zeros()) as i32;
    let mut best = 0.0f64;
    for m in 0..=levels {
        let r = grid.period() * 2f64.powi(-m);
        let r2 = r * r;
        let mut kernel: Vec<Complex64> = dist
            .iter()
            .map(|&d| Complex64::new(if d < r2 * (1.0 - 1e-12) { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let count = kernel.iter().filter(|v| v.re > 0.0).count() as f64;
        fft::forward(&grid, &mut kernel);
        for (kv, pv) in kernel.iter_mut().zip(&power) {
            *kv *= pv;
        }
        fft::inverse(&grid, &mut kernel);
        // undo the two 1/N^n factors of the forward transforms
        let scale = grid.len() as f64 / count;
        let max_mean = kernel.iter().map(|v| (v.re * scale).max(0.0)).fold(0.0, f64::max);
        best = best.max(r.powf(lambda) * max_mean.powf(1.0 / q));
    }
    Ok(peak * best)
}

/// `‖f‖_{M^{q,λ}}` over grid-point centres and dyadic radii.
pub fn morrey_norm(f: &SpectralField, q: f64, lambda: f64) -> Result<f64> {
    morrey_norm_of_samples(f.grid(), &f.magnitude(), q, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_ball_is_one_cell() {
        let g = Grid::new(2, 16).unwrap();
        let mut s = vec![0.0; g.len()];
        s[37] = 1.0;
        let h = g.spacing();
        let lambda = 0.5;
        // the one-cell ball gives h^λ; larger balls dilute faster than r^λ grows
        let v = morrey_norm_of_samples(g, &s, 2.0, lambda).unwrap();
        assert!((v - h.powf(lambda)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn rejects_out_of_range_exponent() {
        let g = Grid::new(2, 8).unwrap();
        let s = vec![1.0; g.len()];
        assert!(morrey_norm_of_samples(g, &s, 2.0, 1.2).is_err());
        assert!(morrey_norm_of_samples(g, &s, 2.0, 0.0).is_err());
    }
}
