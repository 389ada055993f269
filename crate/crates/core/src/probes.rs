//! Deterministic test and probe fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::spectral::{leray_project, Grid, SpectralField};

/// Seeded generator used for every probe family.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real field with coefficients in `|k_a| ≤ kmax` (Nyquist excluded),
/// amplitudes damped like `(1 + |k|²)^{−decay/2}`; the mean is removed.
pub fn random_field<R: Rng>(grid: Grid, ncomp: usize, kmax: i64, decay: f64, rng: &mut R) -> SpectralField {
    let nyq = (grid.modes / 2) as i64;
    let kmax = kmax.min(nyq - 1);
    let mut f = SpectralField::zeros(grid, ncomp);
    for c in 0..ncomp {
        for flat in 1..grid.len() {
            let k = grid.wavevector(flat);
            if k[..grid.n].iter().any(|&x| x.abs() > kmax) {
                continue;
            }
            let neg = grid.negate(flat);
            if neg < flat {
                continue;
            }
            let damp = (1.0 + grid.k_squared(flat)).powf(-decay / 2.0);
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * damp;
            let comp = f.component_mut(c);
            if neg == flat {
                comp[flat] = Complex64::new(v.re, 0.0);
            } else {
                comp[flat] = v;
                comp[neg] = v.conj();
            }
        }
    }
    f
}

/// Random divergence-free, mean-zero vector field.
pub fn random_solenoidal<R: Rng>(grid: Grid, kmax: i64, decay: f64, rng: &mut R) -> SpectralField {
    leray_project(&random_field(grid, grid.n, kmax, decay, rng))
}

/// `a (sin x₁ cos x₂, −cos x₁ sin x₂)`, extended by zero in 3D.
pub fn taylor_green(grid: Grid, amplitude: f64) -> SpectralField {
    SpectralField::from_fn(grid, grid.n, |x| {
        let mut v = vec![0.0; grid.n];
        v[0] = amplitude * x[0].sin() * x[1].cos();
        v[1] = -amplitude * x[0].cos() * x[1].sin();
        v
    })
}

/// Taylor–Green plus a second shell, the mode `(2, 1)` of stream function
/// `½ sin(2x₁ + x₂)`. Pure Taylor–Green is a steady Euler flow whose
/// projected nonlinearity vanishes; the second shell makes it act.
pub fn perturbed_taylor_green(grid: Grid, amplitude: f64) -> SpectralField {
    SpectralField::from_fn(grid, grid.n, |x| {
        let mut v = vec![0.0; grid.n];
        let c = 0.5 * (2.0 * x[0] + x[1]).cos();
        v[0] = amplitude * (x[0].sin() * x[1].cos() + c);
        v[1] = -amplitude * (x[0].cos() * x[1].sin() + 2.0 * c);
        v
    })
}
