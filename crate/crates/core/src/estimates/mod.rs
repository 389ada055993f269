//! Measurements of the linear estimates behind the fixed-point argument:
//! semigroup decay exponents, the Hardy–Littlewood operator, resolvent
//! bounds and admissibility of observation and control operators.

mod admissibility;
mod decay;
mod hardy;
mod linfty;
mod model;
mod probes;

pub use admissibility::{
    admissibility_doubling, Condition, DoublingRow, DoublingStudy,
    admissibility_a1, admissibility_a2, control_kernel_constant, coordinate_trajectory_norm, critical_control,
    critical_observation, hypothesis_constant, piecewise_control_ratio, resolvent_family_bound, trajectory_norm,
    verify_a3_convolution, A3Report, AdmissibilityA1, AdmissibilityA2, GAMMA_TOL, GRID_PER_DECADE, LAMBDA_MARGIN,
};
pub use decay::{decay_exponent, decay_exponent_diagonal, diagonal_window, DecayFit, TorusDecaySetting, MIN_R2};
pub use hardy::{
    classify, hardy_littlewood_apply, hl_scaling_residual, hardy_littlewood_bound_probe, HardyLittlewood, HlProbeReport, Stencil, Verdict,
    EXTENSION_SCALES, STABLE_GROWTH, UNBOUNDED_GROWTH,
};
pub use linfty::{verify_linfty_convolution, LinftyReport};
pub use model::DiagonalModel;
pub use probes::{diagonal_probes, gaussian_vectors, Probe, ProbeFamily, ProbeSummary};
