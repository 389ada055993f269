use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Riemann-sum norm `(v Σ |x_i|^q)^{1/q}` of samples with cell volume `v`;
/// `q = ∞` gives the sample maximum.
pub fn lebesgue_norm_of_samples(samples: &[f64], cell: f64, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::Domain(format!("Lebesgue exponent must be >= 1, got {q}")));
    }
    let top = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if q.is_infinite() || top == 0.0 {
        return Ok(top);
    }
    // scaled by the maximum so large q cannot overflow
    let s: f64 = samples.iter().map(|v| (v.abs() / top).powf(q)).sum();
    Ok(top * (cell * s).powf(1.0 / q))
}

/// Weak norm `max_k f*_k (k v)^{1/q}` from the exact decreasing rearrangement.
pub fn weak_norm_of_samples(samples: &[f64], cell: f64, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::Domain(format!("weak Lebesgue exponent must be >= 1, got {q}")));
    }
    let mut sorted: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if q.is_infinite() {
        return Ok(sorted.first().copied().unwrap_or(0.0));
    }
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| v * ((i + 1) as f64 * cell).powf(1.0 / q))
        .fold(0.0, f64::max))
}

/// `‖f‖_{L^q(T^n)}` from grid samples of `|f|`.
pub fn lebesgue_norm(f: &SpectralField, q: f64) -> Result<f64> {
    lebesgue_norm_of_samples(&f.magnitude(), f.grid().cell_volume(), q)
}

/// `‖f‖_{L^{q,∞}(T^n)}` from grid samples of `|f|`.
pub fn weak_lebesgue_norm(f: &SpectralField, q: f64) -> Result<f64> {
    weak_norm_of_samples(&f.magnitude(), f.grid().cell_volume(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn indicator_weak_norm_is_exact() {
        let cell = 0.25;
        let mut s = vec![0.0; 64];
        for v in s.iter_mut().take(5) {
            *v = 1.0;
        }
        let w = weak_norm_of_samples(&s, cell, 3.0).unwrap();
        assert!((w - (5.0f64 * cell).powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let s = vec![1e10, 2e10];
        let v = lebesgue_norm_of_samples(&s, 1.0, 200.0).unwrap();
        assert!(v.is_finite() && v >= 2e10);
    }

    #[test]
    fn rejects_small_exponent() {
        let g = Grid::new(2, 8).unwrap();
        let f = SpectralField::zeros(g, 1);
        assert!(matches!(lebesgue_norm(&f, 0.5), Err(Error::Domain(_))));
    }
}
