use serde::{Deserialize, Serialize};

use crate::spaces::SpaceTag;
use crate::time::{TimeGrid, WeightedTimeNorm};
use crate::{Error, Result};

/// Which auxiliary space `Z` carries the iteration, and with it the scaling
/// relation between `α`, `p` and the spatial exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    /// `Z = L^q`, `α + 1/p = 1/2 − n/(2q)`.
    Lebesgue,
    /// `Z = L^{q,∞}`, same relation.
    WeakLebesgue,
    /// `Z = M^{q,λ}`, `α + 1/p = (1 − λ)/2`.
    Morrey,
    /// `Z = C^ε`, `α + 1/p < 1/2`, generator shifted by the identity.
    Hoelder,
}

/// Exponent tuple of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub setting: Setting,
    pub n: usize,
    #[serde(with = "crate::exponent")]
    pub q: f64,
    #[serde(with = "crate::exponent")]
    pub p: f64,
    pub alpha: f64,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    pub tau: f64,
}

/// One scaling identity and how far the tuple is from satisfying it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub identity: String,
    pub residual: f64,
    pub ok: bool,
}

const IDENTITY_TOL: f64 = 1e-12;

impl ExponentConfig {
    pub fn lebesgue(n: usize, q: f64, p: f64, tau: f64) -> Self {
        let alpha = 0.5 - n as f64 / (2.0 * q) - 1.0 / p;
        Self {
            setting: Setting::Lebesgue,
            n,
            q,
            p,
            alpha,
            lambda: None,
            eps: None,
            tau,
        }
    }

    pub fn weak_lebesgue(n: usize, q: f64, p: f64, tau: f64) -> Self {
        Self {
            setting: Setting::WeakLebesgue,
            ..Self::lebesgue(n, q, p, tau)
        }
    }

    pub fn morrey(n: usize, q: f64, lambda: f64, p: f64, tau: f64) -> Self {
        Self {
            setting: Setting::Morrey,
            n,
            q,
            p,
            alpha: 0.5 * (1.0 - lambda) - 1.0 / p,
            lambda: Some(lambda),
            eps: None,
            tau,
        }
    }

    pub fn hoelder(n: usize, eps: f64, p: f64, alpha: f64, tau: f64) -> Self {
        Self {
            setting: Setting::Hoelder,
            n,
            q: f64::INFINITY,
            p,
            alpha,
            lambda: None,
            eps: Some(eps),
            tau,
        }
    }

    /// `α + 1/p`.
    pub fn index(&self) -> f64 {
        self.alpha + 1.0 / self.p
    }

    /// Decay exponent `γ` of `‖T(t)‖_{W→Z} ≲ t^{−γ}` for the setting.
    pub fn gamma(&self) -> f64 {
        match self.setting {
            Setting::Lebesgue | Setting::WeakLebesgue => 0.5 + self.n as f64 / (2.0 * self.q),
            Setting::Morrey => 0.5 * (1.0 + self.lambda.unwrap_or(f64::NAN)),
            Setting::Hoelder => 0.5 * (1.0 + self.eps.unwrap_or(f64::NAN)),
        }
    }

    /// Generator shift `ν` in `e^{−t(−Δ+ν)}`.
    pub fn shift(&self) -> f64 {
        if self.setting == Setting::Hoelder {
            1.0
        } else {
            0.0
        }
    }

    /// Auxiliary space `Z`.
    pub fn space(&self) -> SpaceTag {
        match self.setting {
            Setting::Lebesgue => SpaceTag::Lq { q: self.q },
            Setting::WeakLebesgue => SpaceTag::WeakLq { q: self.q },
            Setting::Morrey => SpaceTag::Morrey {
                q: self.q,
                lambda: self.lambda.unwrap_or(f64::NAN),
            },
            Setting::Hoelder => SpaceTag::Hoelder {
                eps: self.eps.unwrap_or(f64::NAN),
            },
        }
    }

    /// Initial-data space `X`: the critical homogeneous Besov space
    /// `Ḃ^{−1+n/q}_{q,p}`, and `B^{ε−1}_{∞,∞}` in the Hölder setting.
    pub fn data_space(&self) -> SpaceTag {
        match self.setting {
            Setting::Hoelder => SpaceTag::Besov {
                s: self.eps.unwrap_or(f64::NAN) - 1.0,
                q: f64::INFINITY,
                p: f64::INFINITY,
            },
            _ => SpaceTag::HomBesov {
                s: -1.0 + self.n as f64 / self.q,
                q: self.q,
                p: self.p,
            },
        }
    }

    /// Fixed-point space `E = L^p_α((0, τ), Z)`.
    pub fn e_norm(&self) -> WeightedTimeNorm {
        WeightedTimeNorm::new(self.p, self.alpha, self.space())
    }

    /// Residual of every identity relevant to the setting.
    pub fn residuals(&self) -> Vec<Residual> {
        let s = self.index();
        let mut out = Vec::new();
        let mut push = |identity: &str, residual: f64, ok: bool| {
            out.push(Residual {
                identity: identity.to_string(),
                residual,
                ok,
            })
        };
        match self.setting {
            Setting::Lebesgue | Setting::WeakLebesgue => {
                let r = s - (0.5 - self.n as f64 / (2.0 * self.q));
                push("alpha + 1/p = 1/2 - n/(2q)", r, r.abs() <= IDENTITY_TOL)
            }
            Setting::Morrey => {
                let r = s - 0.5 * (1.0 - self.lambda.unwrap_or(f64::NAN));
                push("alpha + 1/p = (1 - lambda)/2", r, r.abs() <= IDENTITY_TOL)
            }
            Setting::Hoelder => push("alpha + 1/p < 1/2", (s - 0.5).max(0.0), s < 0.5),
        }
        out
    }

    /// Range checks plus the scaling identity; `expect_failure` waives the
    /// identity but not the ranges.
    pub fn validate(&self, expect_failure: bool) -> Result<()> {
        if !(self.n == 2 || self.n == 3) {
            return Err(Error::Domain(format!("dimension must be 2 or 3, got {}", self.n)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive and finite, got {}", self.tau)));
        }
        if !(self.p > 2.0) {
            return Err(Error::Domain(format!("p must lie in (2, inf], got {}", self.p)));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::Domain(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        let s = self.index();
        if !(s > 0.0 && s < 0.5) {
            return Err(Error::Domain(format!("alpha + 1/p = {s} outside (0, 1/2)")));
        }
        self.space().validate(self.n)?;
        if !expect_failure {
            if let Some(bad) = self.residuals().into_iter().find(|r| !r.ok) {
                return Err(Error::Domain(format!(
                    "scaling identity {} violated by {:e}",
                    bad.identity, bad.residual
                )));
            }
        }
        Ok(())
    }
}

/// Solver settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KatoConfig {
    pub exponents: ExponentConfig,
    /// Absolute tolerance on `‖z_{n+1} − z_n‖_E`.
    pub tol: f64,
    pub max_iter: usize,
    /// Measured bound of the bilinear map on `E`, if known.
    #[serde(default)]
    pub eta_bilinear: Option<f64>,
    /// Smallness requires `‖y‖_E < margin / (4η)`.
    #[serde(default = "default_margin")]
    pub smallness_margin: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_grading")]
    pub grading: f64,
}

fn default_margin() -> f64 {
    1.0
}

fn default_nodes() -> usize {
    TimeGrid::DEFAULT_NODES
}

fn default_grading() -> f64 {
    TimeGrid::DEFAULT_GRADING
}

impl KatoConfig {
    pub fn new(exponents: ExponentConfig) -> Self {
        Self {
            exponents,
            tol: 1e-10,
            max_iter: 50,
            eta_bilinear: None,
            smallness_margin: 1.0,
            nodes: TimeGrid::DEFAULT_NODES,
            grading: TimeGrid::DEFAULT_GRADING,
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::graded(self.exponents.tau, self.nodes, self.grading)
    }

    pub fn validate(&self, expect_failure: bool) -> Result<()> {
        self.exponents.validate(expect_failure)?;
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Domain("tol must be positive and max_iter nonzero".into()));
        }
        if !(self.smallness_margin > 0.0) {
            return Err(Error::Domain("smallness margin must be positive".into()));
        }
        Ok(())
    }
}
