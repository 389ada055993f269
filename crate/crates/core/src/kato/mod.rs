//! Kato's fixed-point iteration for the mild Navier–Stokes equation
//!
//! ```text
//! u(t) = T(t)u0 − ∫_0^t T(t−s) P∇·(u⊗u)(s) ds + ∫_0^t T(t−s) P f(s) ds
//! ```
//!
//! in `E = L^p_α((0, τ), Z)`, plus an integrating-factor RK4 reference
//! integrator used as an independent oracle.

mod config;
mod picard;
mod propagator;
mod reference;
mod threshold;

pub use config::{ExponentConfig, KatoConfig, Residual, Setting};
pub use picard::{
    picard_solve, picard_solve_from, picard_with, InitialIterate, IterationDiagnostics,
    SmallnessVerdict, Solution,
};
pub use propagator::{
    duhamel_bilinear, exponential_hat_weights, free_evolution, Forcing, Propagator,
    INPUT_DIV_TOL,
};
pub use reference::{reference_solve, reference_solve_at, ReferenceOptions};
pub use threshold::{
    compare_threshold, eta_corpus, measure_eta, predicted_threshold, smallness_threshold,
    ThresholdComparison, ThresholdReport, ThresholdSample,
    ETA_SAFETY,
};
