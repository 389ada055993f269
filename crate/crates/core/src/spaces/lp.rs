use rayon::prelude::*;

use super::lebesgue::{lebesgue_norm_of_samples, weak_norm_of_samples};
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result};

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth radial cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn cutoff(r: f64) -> f64 {
    let a = smooth_step(2.0 - r);
    let b = smooth_step(r - 1.0);
    a / (a + b)
}

/// Dyadic bump `ψ_j(r) = χ(2^{−j} r) − χ(2^{1−j} r)`, supported in
/// `(2^{j−1}, 2^{j+1})`.
pub fn bump(j: i32, r: f64) -> f64 {
    let s = 2f64.powi(-j);
    cutoff(s * r) - cutoff(2.0 * s * r)
}

/// Dyadic blocks `Δ_j f`. In homogeneous mode blocks run over `j ≥ 0` and the
/// mean is discarded; in inhomogeneous mode block 0 is `S_0 f = χ(|D|) f`,
/// which also carries the mean.
#[derive(Clone, Debug)]
pub struct LPDecomposition {
    pub blocks: Vec<(i32, SpectralField)>,
    pub homogeneous: bool,
}

impl LPDecomposition {
    pub fn reconstruct(&self) -> Option<SpectralField> {
        let mut it = self.blocks.iter();
        let mut acc = it.next()?.1.clone();
        for (_, b) in it {
            acc.axpy(1.0, b).ok()?;
        }
        Some(acc)
    }
}

fn top_level(grid: &Grid) -> i32 {
    let kmax = (grid.n as f64).sqrt() * (grid.modes / 2) as f64;
    kmax.log2().ceil() as i32
}

fn decompose(f: &SpectralField, homogeneous: bool) -> LPDecomposition {
    let grid = f.grid();
    let radii: Vec<f64> = (0..grid.len()).map(|i| grid.k_squared(i).sqrt()).collect();
    let blocks = (0..=top_level(&grid))
        .into_par_iter()
        .map(|j| {
            let mut b = f.clone();
            for (flat, &r) in radii.iter().enumerate() {
                let w = if j == 0 && !homogeneous {
                    cutoff(r)
                } else {
                    bump(j, r)
                };
                for c in 0..b.ncomp() {
                    b.component_mut(c)[flat] *= w;
                }
            }
            (j, b)
        })
        .collect();
    LPDecomposition {
        blocks,
        homogeneous,
    }
}

/// Homogeneous Littlewood–Paley decomposition.
pub fn littlewood_paley(f: &SpectralField) -> LPDecomposition {
    decompose(f, true)
}

/// Inhomogeneous decomposition with base block `S_0`.
pub fn littlewood_paley_inhomogeneous(f: &SpectralField) -> LPDecomposition {
    decompose(f, false)
}

/// Norm applied to each dyadic block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InnerNorm {
    Lebesgue(f64),
    Weak(f64),
}

impl InnerNorm {
    fn eval(&self, f: &SpectralField) -> Result<f64> {
        let cell = f.grid().cell_volume();
        match *self {
            InnerNorm::Lebesgue(q) => lebesgue_norm_of_samples(&f.magnitude(), cell, q),
            InnerNorm::Weak(q) => weak_norm_of_samples(&f.magnitude(), cell, q),
        }
    }
}

/// `ℓ^p` norm over blocks of `2^{js}‖Δ_j f‖_inner`.
pub fn besov_norm(
    f: &SpectralField,
    s: f64,
    inner: InnerNorm,
    p: f64,
    homogeneous: bool,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("summation index must be >= 1, got {p}")));
    }
    if homogeneous && !f.is_mean_zero(1e-12) {
        return Err(Error::ZeroMode(format!(
            "homogeneous Besov norm of a field with mean {:e}",
            f.mean_norm()
        )));
    }
    let lp = decompose(f, homogeneous);
    let terms = lp
        .blocks
        .par_iter()
        .map(|(j, b)| Ok(2f64.powf(*j as f64 * s) * inner.eval(b)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(sequence_norm(&terms, p))
}

pub(crate) fn sequence_norm(terms: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        terms.iter().fold(0.0, |m, &v| m.max(v))
    } else {
        let top = terms.iter().fold(0.0f64, |m, &v| m.max(v));
        if top == 0.0 {
            return 0.0;
        }
        top * terms.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Hölder norm `C^ε`, realised as the inhomogeneous `B^ε_{∞,∞}` norm.
pub fn hoelder_norm(f: &SpectralField, eps: f64) -> Result<f64> {
    besov_norm(f, eps, InnerNorm::Lebesgue(f64::INFINITY), f64::INFINITY, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_plateaus() {
        assert_eq!(cutoff(0.3), 1.0);
        assert_eq!(cutoff(1.0), 1.0);
        assert_eq!(cutoff(2.0), 0.0);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bump_support() {
        for j in 0..6 {
            let lo = 2f64.powi(j - 1);
            let hi = 2f64.powi(j + 1);
            assert_eq!(bump(j, lo * 0.999), 0.0);
            assert_eq!(bump(j, hi * 1.001), 0.0);
            assert!(bump(j, 2f64.powi(j)) > 0.0);
        }
    }

    #[test]
    fn sequence_norm_cases() {
        assert_eq!(sequence_norm(&[3.0, 4.0], 2.0), 5.0);
        assert_eq!(sequence_norm(&[3.0, 4.0], f64::INFINITY), 4.0);
        assert_eq!(sequence_norm(&[0.0, 0.0], 1.0), 0.0);
    }
}
