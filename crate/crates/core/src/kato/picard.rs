use serde::{Deserialize, Serialize};

use super::{Forcing, KatoConfig, Propagator};
use crate::spectral::SpectralField;
use crate::time::{trajectory_norm, Trajectory, WeightedTimeNorm};
use crate::{Error, Result};

/// Comparison of `‖y‖_E` with the sufficient bound `margin/(4η)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessVerdict {
    pub eta: f64,
    pub bound: f64,
    pub y_norm: f64,
    pub satisfied: bool,
}

/// Record of a Picard run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostics {
    /// `‖y‖_E`.
    pub y_norm: f64,
    /// `‖z_n‖_E` for every iterate, starting with `z_0`.
    pub e_norms: Vec<f64>,
    /// `‖z_{n+1} − z_n‖_E`.
    pub increments: Vec<f64>,
    /// Ratios of successive increments.
    pub contraction: Vec<f64>,
    pub smallness: Option<SmallnessVerdict>,
    /// `‖z − y − B(z, z)‖_E` of the returned iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl IterationDiagnostics {
    /// Largest measured contraction factor.
    pub fn max_contraction(&self) -> f64 {
        self.contraction.iter().copied().fold(0.0, f64::max)
    }
}

/// Starting point of the iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialIterate {
    /// `z_0 = y`.
    Free,
    /// `z_0 = 0`.
    Zero,
}

/// Output of [`picard_solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    /// Reconstructed mild solution `x = y + B(z, z)`.
    pub x: Trajectory,
    /// Final iterate.
    pub z: Trajectory,
    /// Linear part `y`.
    pub y: Trajectory,
    pub diagnostics: IterationDiagnostics,
}

const BALL_FACTOR: f64 = 4.0;
const STRIKES: usize = 3;

/// Picard iteration `z_{n+1} = y + B(z_n, z_n)` in `E = L^p_α((0, τ), Z)`.
///
/// `y = T(·)u0 + ∫T(·−s)P f(s) ds`, `B(u, v) = −∫T(·−s)P∇·(u⊗v)(s) ds`.
/// Stops once `‖z_{n+1} − z_n‖_E < tol`. Fails with
/// [`Error::Divergence`] when `‖z_n‖_E > 4‖y‖_E` or the increment grows for
/// three consecutive iterations, or when iterates stop being finite.
pub fn picard_solve(
    u0: &SpectralField,
    forcing: Option<&Forcing>,
    cfg: &KatoConfig,
) -> Result<Solution> {
    picard_solve_from(u0, forcing, cfg, InitialIterate::Free)
}

pub fn picard_solve_from(
    u0: &SpectralField,
    forcing: Option<&Forcing>,
    cfg: &KatoConfig,
    init: InitialIterate,
) -> Result<Solution> {
    cfg.validate(true)?;
    let times = cfg.time_grid()?;
    let prop = Propagator::new(u0.grid(), &times, cfg.exponents.shift());
    picard_with(&prop, u0, forcing, cfg, init)
}

/// As [`picard_solve_from`] with a prebuilt propagator.
pub fn picard_with(
    prop: &Propagator,
    u0: &SpectralField,
    forcing: Option<&Forcing>,
    cfg: &KatoConfig,
    init: InitialIterate,
) -> Result<Solution> {
    let e = cfg.exponents.e_norm();
    let mut y = prop.free_evolution(u0)?;
    if let Some(f) = forcing.filter(|f| !f.is_empty()) {
        y = y.axpy(1.0, &prop.forcing_term(f)?)?;
    }
    iterate(prop, y, &e, cfg, init)
}

fn iterate(
    prop: &Propagator,
    y: Trajectory,
    e: &WeightedTimeNorm,
    cfg: &KatoConfig,
    init: InitialIterate,
) -> Result<Solution> {
    let y_norm = trajectory_norm(&y, e)?;
    let mut diag = IterationDiagnostics {
        y_norm,
        smallness: cfg.eta_bilinear.map(|eta| {
            let bound = cfg.smallness_margin / (4.0 * eta);
            SmallnessVerdict {
                eta,
                bound,
                y_norm,
                satisfied: y_norm < bound,
            }
        }),
        ..Default::default()
    };
    let mut z = match init {
        InitialIterate::Free => y.clone(),
        InitialIterate::Zero => y.scale(0.0),
    };
    diag.e_norms.push(trajectory_norm(&z, e)?);
    let (mut outside, mut growing) = (0usize, 0usize);
    let divergence = |reason: String, diag: IterationDiagnostics| Error::Divergence {
        reason,
        diagnostics: Box::new(diag),
    };
    loop {
        let next = y.axpy(1.0, &prop.bilinear(&z, &z)?)?;
        let increment = trajectory_norm(&next.axpy(-1.0, &z)?, e)?;
        let norm = trajectory_norm(&next, e)?;
        diag.iterations += 1;
        if let Some(&last) = diag.increments.last() {
            diag.contraction.push(if last > 0.0 { increment / last } else { 0.0 });
            growing = if increment > last { growing + 1 } else { 0 };
        }
        diag.increments.push(increment);
        diag.e_norms.push(norm);
        z = next;
        if !(norm.is_finite() && increment.is_finite()) {
            return Err(divergence("iterate is no longer finite".into(), diag));
        }
        if increment < cfg.tol {
            break;
        }
        outside = if norm > BALL_FACTOR * y_norm { outside + 1 } else { 0 };
        if outside >= STRIKES {
            return Err(divergence(
                format!("iterates left the ball of radius {BALL_FACTOR}|y|_E"),
                diag,
            ));
        }
        if growing >= STRIKES {
            return Err(divergence("increments grew three times in a row".into(), diag));
        }
        if diag.iterations >= cfg.max_iter {
            return Err(Error::NoConvergence {
                iterations: diag.iterations,
                diagnostics: Box::new(diag),
            });
        }
    }
    let x = y.axpy(1.0, &prop.bilinear(&z, &z)?)?;
    diag.residual = trajectory_norm(&z.axpy(-1.0, &x)?, e)?;
    diag.converged = true;
    Ok(Solution {
        x,
        z,
        y,
        diagnostics: diag,
    })
}
