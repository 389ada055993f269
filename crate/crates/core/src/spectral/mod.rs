//! Fourier-side representation of periodic vector fields on `T^n = (0, 2π)^n`
//! and the multiplier operators used by the solver.
//!
//! Coefficients are normalised so that `u(x) = Σ_k û(k) e^{i k·x}`; a single
//! mode `e^{i x_1}` therefore has coefficient 1 at `k = e_1`.

pub(crate) mod fft;
mod field;
mod grid;
pub mod io;
mod multiplier;
mod ops;

pub use field::SpectralField;
pub use grid::Grid;
pub use multiplier::{Multiplier, Symbol, ZeroModeRule};
pub use ops::{
    apply_multiplier, convective_term, dealias_cutoff, divergence, fractional_laplacian, heat_semigroup,
    heat_semigroup_shifted, leray_project, nonlinearity, tensor_divergence,
};

/// Relative tolerance for identities that hold exactly in exact arithmetic.
pub const SPECTRAL_TOL: f64 = 1e-12;
