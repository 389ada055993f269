use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

type ScalarFn = dyn Fn(&[i64]) -> Complex64 + Send + Sync;
type MatrixFn = dyn Fn(&[i64]) -> Vec<Complex64> + Send + Sync;

/// How a multiplier treats the `k = 0` coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroModeRule {
    /// Pass the mean through unchanged.
    Identity,
    /// Annihilate the mean.
    Zero,
    /// Fail if the mean is nonzero.
    Reject,
    /// Evaluate the symbol at `k = 0` like any other mode.
    Evaluate,
}

/// Fourier symbol, either scalar (applied to every component) or an `n×n`
/// matrix in row-major order acting on the component vector.
#[derive(Clone)]
pub enum Symbol {
    Scalar(Arc<ScalarFn>),
    Matrix(Arc<MatrixFn>),
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Scalar(_) => f.write_str("Symbol::Scalar"),
            Symbol::Matrix(_) => f.write_str("Symbol::Matrix"),
        }
    }
}

/// Fourier multiplier `m(D)`: `û(k) ↦ m(k) û(k)` for `k ≠ 0`, with the zero
/// mode resolved by an explicit rule.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub symbol: Symbol,
    pub zero_mode: ZeroModeRule,
    pub label: String,
}

fn k_norm_sq(k: &[i64]) -> f64 {
    k.iter().map(|&c| (c * c) as f64).sum()
}

impl Multiplier {
    pub fn scalar<F>(label: &str, zero_mode: ZeroModeRule, f: F) -> Self
    where
        F: Fn(&[i64]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            symbol: Symbol::Scalar(Arc::new(f)),
            zero_mode,
            label: label.to_string(),
        }
    }

    pub fn matrix<F>(label: &str, zero_mode: ZeroModeRule, f: F) -> Self
    where
        F: Fn(&[i64]) -> Vec<Complex64> + Send + Sync + 'static,
    {
        Self {
            symbol: Symbol::Matrix(Arc::new(f)),
            zero_mode,
            label: label.to_string(),
        }
    }

    pub fn identity() -> Self {
        Self::scalar("identity", ZeroModeRule::Identity, |_| Complex64::new(1.0, 0.0))
    }

    /// `∂_axis`, symbol `i k_axis`. The Nyquist wavenumber is mapped to zero so
    /// that the result stays real.
    pub fn derivative(axis: usize, modes: usize) -> Self {
        let nyq = (modes / 2) as i64;
        Self::scalar("derivative", ZeroModeRule::Identity, move |k| {
            let ka = k[axis];
            if ka == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, ka as f64)
            }
        })
    }

    /// `−Δ`, symbol `|k|²`.
    pub fn neg_laplacian() -> Self {
        Self::scalar("neg_laplacian", ZeroModeRule::Zero, |k| {
            Complex64::new(k_norm_sq(k), 0.0)
        })
    }

    /// `e^{tΔ}`, symbol `e^{−t|k|²}`.
    pub fn heat(t: f64) -> Self {
        Self::heat_shifted(t, 0.0)
    }

    /// `e^{−t(−Δ+ν)}`, symbol `e^{−t(|k|²+ν)}`; the zero mode decays like `e^{−tν}`.
    pub fn heat_shifted(t: f64, nu: f64) -> Self {
        Self::scalar("heat", ZeroModeRule::Evaluate, move |k| {
            Complex64::new((-t * (k_norm_sq(k) + nu)).exp(), 0.0)
        })
    }

    /// `(−Δ)^s`, symbol `|k|^{2s}`. Negative powers reject a nonzero mean.
    pub fn fractional_laplacian(s: f64) -> Self {
        let rule = if s == 0.0 {
            ZeroModeRule::Identity
        } else if s < 0.0 {
            ZeroModeRule::Reject
        } else {
            ZeroModeRule::Zero
        };
        Self::scalar("fractional_laplacian", rule, move |k| {
            Complex64::new(k_norm_sq(k).powf(s), 0.0)
        })
    }

    /// Leray projector, symbol `I − k kᵀ/|k|²` with `P̂(0) = I`.
    pub fn leray(n: usize) -> Self {
        Self::matrix("leray", ZeroModeRule::Identity, move |k| {
            let kk = k_norm_sq(&k[..n]);
            let mut m = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                for j in 0..n {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    m[i * n + j] = Complex64::new(delta - (k[i] * k[j]) as f64 / kk, 0.0);
                }
            }
            m
        })
    }
}
