use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::spectral::{leray_project, nonlinearity, tensor_divergence, Grid, SpectralField};
use crate::time::{TimeGrid, Trajectory};
use crate::{Error, Result};

/// Divergence tolerance for initial data, relative to the largest `|k||û(k)|`.
pub const INPUT_DIV_TOL: f64 = 1e-10;

/// Weights of `∫_0^h e^{−μ(h−σ)} φ(σ) dσ` for `φ` linear between `φ(0)` and
/// `φ(h)`: returns `(w_left, w_right)`.
pub fn exponential_hat_weights(mu: f64, h: f64) -> (f64, f64) {
    let z = mu * h;
    // (1 − e^{−z})/z and (1 − e^{−z}(1+z))/z²
    let (i0, i1) = if z < 0.1 {
        let (mut a, mut b) = (0.0, 0.0);
        let mut term = 1.0; // z^{n−1}/n! accumulated as z^{m}/ (m+1)!
        for m in 0..14 {
            let n = (m + 1) as f64;
            if m > 0 {
                term *= z / n;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            a += sign * term;
            // (n−1)/n! z^{n−2} with n = m+2 equals (m+1) z^m/(m+2)!
            b += sign * (m + 1) as f64 * term / (m + 2) as f64;
        }
        (a, b)
    } else {
        let e = (-z).exp();
        ((1.0 - e) / z, (1.0 - e * (1.0 + z)) / (z * z))
    };
    let left = h * i1;
    (left, h * i0 - left)
}

/// Precomputed heat factors and product-integration weights for one spatial
/// grid, time grid and generator shift.
#[derive(Clone, Debug)]
pub struct Propagator {
    space: Grid,
    times: TimeGrid,
    nu: f64,
    shell: Vec<u32>,
    /// `e^{−t_j μ}` per node and shell.
    free: Vec<Vec<f64>>,
    /// `(e^{−hμ}, w_left, w_right)` per interval and shell.
    steps: Vec<Vec<(f64, f64, f64)>>,
}

impl Propagator {
    pub fn new(space: Grid, times: &TimeGrid, nu: f64) -> Self {
        let mut k2: Vec<u64> = (0..space.len()).map(|i| space.k_squared(i) as u64).collect();
        let mut shells = k2.clone();
        shells.sort_unstable();
        shells.dedup();
        let shell: Vec<u32> = k2
            .iter_mut()
            .map(|v| shells.binary_search(v).unwrap() as u32)
            .collect();
        let mu: Vec<f64> = shells.iter().map(|&s| s as f64 + nu).collect();
        let t = times.nodes();
        let free = t
            .iter()
            .map(|&tj| mu.iter().map(|m| (-tj * m).exp()).collect())
            .collect();
        let steps = t
            .windows(2)
            .map(|w| {
                let h = w[1] - w[0];
                mu.iter()
                    .map(|&m| {
                        let (a, b) = exponential_hat_weights(m, h);
                        ((-h * m).exp(), a, b)
                    })
                    .collect()
            })
            .collect();
        Self {
            space,
            times: times.clone(),
            nu,
            shell,
            free,
            steps,
        }
    }

    pub fn space(&self) -> Grid {
        self.space
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn shift(&self) -> f64 {
        self.nu
    }

    fn check(&self, x: &Trajectory) -> Result<()> {
        if x.grid != self.times || x.space_grid() != self.space {
            return Err(Error::Grid("trajectory does not match the propagator grids".into()));
        }
        Ok(())
    }

    /// `T(t_j) u0` at every node.
    pub fn free_evolution(&self, u0: &SpectralField) -> Result<Trajectory> {
        if u0.grid() != self.space {
            return Err(Error::Grid("initial data on a different grid".into()));
        }
        if u0.ncomp() != self.space.n || !u0.is_divergence_free(INPUT_DIV_TOL) {
            return Err(Error::Input(format!(
                "initial data must be a divergence-free vector field (defect {:e})",
                if u0.ncomp() == self.space.n { u0.divergence_defect() } else { f64::NAN }
            )));
        }
        if !u0.is_mean_zero(1e-12) {
            return Err(Error::Input("initial data must have zero mean".into()));
        }
        Ok(self.evolve_unchecked(u0))
    }

    pub(crate) fn evolve_unchecked(&self, u0: &SpectralField) -> Trajectory {
        let fields = self
            .free
            .par_iter()
            .map(|g| {
                let mut f = u0.clone();
                for c in 0..f.ncomp() {
                    for (v, &s) in f.component_mut(c).iter_mut().zip(&self.shell) {
                        *v *= g[s as usize];
                    }
                }
                f
            })
            .collect();
        Trajectory {
            grid: self.times.clone(),
            fields,
        }
    }

    /// `∫_0^{t_j} T(t_j − s) g(s) ds` with `g` linear between nodes, each
    /// interval integrated exactly against the semigroup.
    pub fn duhamel(&self, g: &Trajectory) -> Result<Trajectory> {
        self.check(g)?;
        let ncomp = g.fields[0].ncomp();
        let len = self.space.len();
        let zero = Complex64::new(0.0, 0.0);
        // per component, march the recursion over all nodes
        let comps: Vec<Vec<Vec<Complex64>>> = (0..ncomp)
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::with_capacity(self.times.len());
                let mut acc = vec![zero; len];
                out.push(acc.clone());
                for (j, step) in self.steps.iter().enumerate() {
                    let left = g.fields[j].component(c);
                    let right = g.fields[j + 1].component(c);
                    for i in 0..len {
                        let (e, a, b) = step[self.shell[i] as usize];
                        acc[i] = acc[i] * e + left[i] * a + right[i] * b;
                    }
                    out.push(acc.clone());
                }
                out
            })
            .collect();
        let mut fields = Vec::with_capacity(self.times.len());
        for j in 0..self.times.len() {
            let data = comps.iter().map(|c| c[j].clone()).collect();
            fields.push(SpectralField::from_coefficients(self.space, data)?);
        }
        Ok(Trajectory {
            grid: self.times.clone(),
            fields,
        })
    }

    /// `F(u(s), v(s)) = P∇·(u⊗v)` at every node.
    pub fn nonlinear_term(&self, u: &Trajectory, v: &Trajectory) -> Result<Trajectory> {
        self.check(u)?;
        self.check(v)?;
        let fields = u
            .fields
            .par_iter()
            .zip(&v.fields)
            .map(|(a, b)| nonlinearity(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            grid: self.times.clone(),
            fields,
        })
    }

    /// `∫_0^t T(t − s) F(u(s), v(s)) ds`.
    pub fn duhamel_bilinear(&self, u: &Trajectory, v: &Trajectory) -> Result<Trajectory> {
        self.duhamel(&self.nonlinear_term(u, v)?)
    }

    /// `B(u, v) = −∫_0^t T(t − s) F(u(s), v(s)) ds`, the bilinear map of the
    /// fixed-point equation `z = y + B(z, z)`.
    pub fn bilinear(&self, u: &Trajectory, v: &Trajectory) -> Result<Trajectory> {
        Ok(self.duhamel_bilinear(u, v)?.scale(-1.0))
    }

    /// Duhamel term `∫ T(t−s) P(f₀(s) + ∇·F(s)) ds` of a forcing.
    pub fn forcing_term(&self, forcing: &Forcing) -> Result<Trajectory> {
        let projected = forcing.projected(self.space, &self.times)?;
        self.duhamel(&projected)
    }
}

/// Forcing `f = f₀ + ∇·F`: a body force (vector field per node) and/or a
/// stress (`n×n` tensor field per node, row-major).
#[derive(Clone, Debug, Default)]
pub struct Forcing {
    pub body: Option<Trajectory>,
    pub stress: Option<Trajectory>,
}

impl Forcing {
    /// `P(f₀ + ∇·F)` at the nodes of `times`.
    pub fn projected(&self, space: Grid, times: &TimeGrid) -> Result<Trajectory> {
        let mut fields = vec![SpectralField::zero_vector(space); times.len()];
        if let Some(b) = &self.body {
            if b.grid != *times || b.space_grid() != space || b.fields[0].ncomp() != space.n {
                return Err(Error::Grid("body force does not match the run grids".into()));
            }
            for (f, g) in fields.iter_mut().zip(&b.fields) {
                f.axpy(1.0, &leray_project(g))?;
            }
        }
        if let Some(s) = &self.stress {
            if s.grid != *times || s.space_grid() != space {
                return Err(Error::Grid("stress does not match the run grids".into()));
            }
            for (f, g) in fields.iter_mut().zip(&s.fields) {
                f.axpy(1.0, &leray_project(&tensor_divergence(g)?))?;
            }
        }
        Ok(Trajectory {
            grid: times.clone(),
            fields,
        })
    }

    /// `P(f₀ + ∇·F)(t)`, linear in time between the forcing's nodes.
    pub fn projected_at(&self, space: Grid, t: f64) -> Result<SpectralField> {
        let mut out = SpectralField::zero_vector(space);
        let interp = |x: &Trajectory| -> SpectralField {
            let nodes = x.times();
            let j = match nodes.iter().position(|&s| s > t) {
                Some(0) => 0,
                Some(j) => j - 1,
                None => nodes.len() - 2,
            };
            let w = ((t - nodes[j]) / (nodes[j + 1] - nodes[j])).clamp(0.0, 1.0);
            let mut f = x.fields[j].scale(1.0 - w);
            f.axpy(w, &x.fields[j + 1]).expect("nodes share a grid");
            f
        };
        if let Some(b) = &self.body {
            out.axpy(1.0, &leray_project(&interp(b)))?;
        }
        if let Some(s) = &self.stress {
            out.axpy(1.0, &leray_project(&tensor_divergence(&interp(s))?))?;
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_none() && self.stress.is_none()
    }
}

/// `T(t_j) u0` at every node of `times`.
pub fn free_evolution(u0: &SpectralField, times: &TimeGrid) -> Result<Trajectory> {
    Propagator::new(u0.grid(), times, 0.0).free_evolution(u0)
}

/// `∫_0^{t_j} T(t_j − s) F(u(s), v(s)) ds` at every node.
pub fn duhamel_bilinear(u: &Trajectory, v: &Trajectory) -> Result<Trajectory> {
    u.check_compatible(v)?;
    Propagator::new(u.space_grid(), &u.grid, 0.0).duhamel_bilinear(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(mu: f64, h: f64) -> (f64, f64) {
        let z = mu * h;
        let e = (-z).exp();
        let left = (1.0 - e * (1.0 + z)) / (h * mu * mu);
        ((left), (1.0 - e) / mu - left)
    }

    #[test]
    fn series_and_closed_form_agree_near_switch() {
        for &(mu, h) in &[(1.0, 0.099), (2.0, 0.0501), (50.0, 0.002)] {
            let (a, b) = exponential_hat_weights(mu, h);
            let (c, d) = direct(mu, h);
            assert!(((a - c) / c).abs() < 1e-12, "{a} {c}");
            assert!(((b - d) / d).abs() < 1e-12, "{b} {d}");
        }
    }

    #[test]
    fn zero_rate_is_trapezoid() {
        let (a, b) = exponential_hat_weights(0.0, 0.3);
        assert!((a - 0.15).abs() < 1e-16 && (b - 0.15).abs() < 1e-16);
    }

    #[test]
    fn weights_integrate_constants_exactly() {
        for &(mu, h) in &[(0.5, 1e-4), (3.0, 0.2), (400.0, 0.01)] {
            let (a, b) = exponential_hat_weights(mu, h);
            let exact = -(-mu * h as f64).exp_m1() / mu;
            assert!(((a + b - exact) / exact).abs() < 1e-13);
        }
    }
}
