use crate::spectral::{nonlinearity, Grid, SpectralField};
use crate::time::{TimeGrid, Trajectory};
use crate::{Error, Result};

use super::Forcing;

/// Settings of the reference integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceOptions {
    /// Largest substep.
    pub dt: f64,
    /// Generator shift `ν`.
    pub nu: f64,
    /// Include the quadratic term.
    pub nonlinear: bool,
}

impl ReferenceOptions {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            nu: 0.0,
            nonlinear: true,
        }
    }
}

const GROWTH_LIMIT: f64 = 1e3;

struct Rhs<'a> {
    grid: Grid,
    forcing: Option<&'a Forcing>,
    nonlinear: bool,
}

impl Rhs<'_> {
    /// `−F(u, u) + P f(t)`.
    fn eval(&self, u: &SpectralField, t: f64) -> Result<SpectralField> {
        let mut out = if self.nonlinear {
            nonlinearity(u, u)?.scale(-1.0)
        } else {
            SpectralField::zero_vector(self.grid)
        };
        if let Some(f) = self.forcing {
            out.axpy(1.0, &f.projected_at(self.grid, t)?)?;
        }
        Ok(out)
    }
}

fn decay(u: &SpectralField, h: f64, nu: f64) -> SpectralField {
    let grid = u.grid();
    let mut out = u.clone();
    for flat in 0..grid.len() {
        let g = (-h * (grid.k_squared(flat) + nu)).exp();
        for c in 0..out.ncomp() {
            out.component_mut(c)[flat] *= g;
        }
    }
    out
}

/// One integrating-factor RK4 step of `û' = −μ û + N(u, t)`.
fn lawson_step(rhs: &Rhs, u: &SpectralField, t: f64, h: f64, nu: f64) -> Result<SpectralField> {
    let half = 0.5 * h;
    let a = rhs.eval(u, t)?;
    let mut ua = u.clone();
    ua.axpy(half, &a)?;
    let ua = decay(&ua, half, nu);
    let b = rhs.eval(&ua, t + half)?;
    let mut ub = decay(u, half, nu);
    ub.axpy(half, &b)?;
    let c = rhs.eval(&ub, t + half)?;
    let mut uc = decay(u, h, nu);
    uc.axpy(h, &decay(&c, half, nu))?;
    let d = rhs.eval(&uc, t + h)?;
    let mut inner = decay(&a, h, nu);
    let mut bc = b;
    bc.axpy(1.0, &c)?;
    inner.axpy(2.0, &decay(&bc, half, nu))?;
    inner.axpy(1.0, &d)?;
    let mut out = decay(u, h, nu);
    out.axpy(h / 6.0, &inner)?;
    Ok(out)
}

/// Integrates the projected spectral equation with integrating-factor RK4
/// and returns the state at each requested time (ascending, from 0).
pub fn reference_solve_at(
    u0: &SpectralField,
    forcing: Option<&Forcing>,
    times: &[f64],
    opts: ReferenceOptions,
) -> Result<Vec<SpectralField>> {
    if !(opts.dt > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {}", opts.dt)));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().map_or(false, |&t| t < 0.0) {
        return Err(Error::Domain("output times must be ascending and nonnegative".into()));
    }
    let grid = u0.grid();
    let rhs = Rhs {
        grid,
        forcing,
        nonlinear: opts.nonlinear,
    };
    let mut scale = u0.l2_norm();
    if let Some(f) = forcing {
        let horizon = times.last().copied().unwrap_or(0.0);
        scale += horizon * f.projected_at(grid, 0.0)?.l2_norm().max(f.projected_at(grid, horizon)?.l2_norm());
    }
    let mut u = u0.clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / opts.dt).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for i in 0..steps {
                u = lawson_step(&rhs, &u, t + i as f64 * h, h, opts.nu)?;
            }
            let norm = u.l2_norm();
            if !norm.is_finite() || norm > GROWTH_LIMIT * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::Oracle(format!(
                    "reference integrator unstable at t = {target}: norm {norm:e}"
                )));
            }
        }
        t = target;
        out.push(u.clone());
    }
    Ok(out)
}

/// Reference solution at every node of `grid`.
pub fn reference_solve(
    u0: &SpectralField,
    forcing: Option<&Forcing>,
    grid: &TimeGrid,
    opts: ReferenceOptions,
) -> Result<Trajectory> {
    let fields = reference_solve_at(u0, forcing, grid.nodes(), opts)?;
    Trajectory::new(grid.clone(), fields)
}
