//! Versioned experiment configuration.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use katolab::estimates::Condition;
use katolab::kato::{ExponentConfig, Setting};
use katolab::spaces::SpaceTag;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub expect_failure: bool,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    Solve(SolveParams),
    Threshold(ThresholdParams),
    VerifyDecay(DecayParams),
    VerifyHl(HlParams),
    VerifyAdmissibility(AdmissibilityParams),
    VerifyInterp(InterpParams),
    Norms(NormsParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Threshold(_) => "threshold",
            Command::VerifyDecay(_) => "verify-decay",
            Command::VerifyHl(_) => "verify-hl",
            Command::VerifyAdmissibility(_) => "verify-admissibility",
            Command::VerifyInterp(_) => "verify-interp",
            Command::Norms(_) => "norms",
        }
    }

    /// Default parameters for a command name.
    pub fn default_for(name: &str) -> anyhow::Result<Self> {
        Ok(match name {
            "solve" => Command::Solve(Default::default()),
            "threshold" => Command::Threshold(Default::default()),
            "verify-decay" => Command::VerifyDecay(Default::default()),
            "verify-hl" => Command::VerifyHl(Default::default()),
            "verify-admissibility" => Command::VerifyAdmissibility(Default::default()),
            "verify-interp" => Command::VerifyInterp(Default::default()),
            "norms" => Command::Norms(Default::default()),
            other => bail!("unknown command {other}"),
        })
    }
}

/// Exponent tuple; `alpha` defaults to the value fixed by the scaling
/// identity of the setting.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSpec {
    pub setting: Setting,
    pub n: usize,
    #[serde(default = "infinite", with = "katolab::exponent")]
    pub q: f64,
    #[serde(default = "infinite", with = "katolab::exponent")]
    pub p: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    pub tau: f64,
}

fn infinite() -> f64 {
    f64::INFINITY
}

impl Default for ExponentSpec {
    fn default() -> Self {
        Self {
            setting: Setting::Lebesgue,
            n: 2,
            q: 6.0,
            p: f64::INFINITY,
            alpha: None,
            lambda: None,
            eps: None,
            tau: 0.5,
        }
    }
}

impl ExponentSpec {
    pub fn resolve(&self) -> anyhow::Result<ExponentConfig> {
        let mut e = match self.setting {
            Setting::Lebesgue => ExponentConfig::lebesgue(self.n, self.q, self.p, self.tau),
            Setting::WeakLebesgue => ExponentConfig::weak_lebesgue(self.n, self.q, self.p, self.tau),
            Setting::Morrey => {
                let lambda = self.lambda.context("morrey setting needs lambda")?;
                ExponentConfig::morrey(self.n, self.q, lambda, self.p, self.tau)
            }
            Setting::Hoelder => {
                let eps = self.eps.context("hoelder setting needs eps")?;
                let alpha = self.alpha.context("hoelder setting needs alpha")?;
                ExponentConfig::hoelder(self.n, eps, self.p, alpha, self.tau)
            }
        };
        if let Some(a) = self.alpha {
            e.alpha = a;
        }
        Ok(e)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Zero,
    TaylorGreen,
    PerturbedTaylorGreen,
    Random,
}

/// Initial data or probe direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub kind: FieldKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Largest wavenumber of random fields.
    #[serde(default = "default_kmax")]
    pub kmax: i64,
}

fn one() -> f64 {
    1.0
}

fn default_kmax() -> i64 {
    4
}

impl FieldSpec {
    pub fn new(kind: FieldKind, amplitude: f64) -> Self {
        Self {
            kind,
            amplitude,
            kmax: default_kmax(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveParams {
    pub exponents: ExponentSpec,
    /// Modes per axis; 64 in 2D and 32 in 3D when absent.
    pub modes: Option<usize>,
    pub nodes: usize,
    pub grading: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub eta_bilinear: Option<f64>,
    pub initial: FieldSpec,
    /// Compare with the reference integrator at this time.
    pub reference_time: Option<f64>,
    pub reference_dt: f64,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            exponents: ExponentSpec::default(),
            modes: None,
            nodes: 256,
            grading: 2.0,
            tol: 1e-10,
            max_iter: 50,
            eta_bilinear: None,
            initial: FieldSpec::new(FieldKind::PerturbedTaylorGreen, 1e-3),
            reference_time: None,
            reference_dt: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdParams {
    pub exponents: ExponentSpec,
    pub modes: Option<usize>,
    pub nodes: usize,
    pub grading: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub direction: FieldSpec,
    /// Random fields added to the η corpus beyond the direction itself.
    pub extra_probes: usize,
    /// Allowed factor between measured and predicted thresholds.
    pub factor: f64,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        Self {
            exponents: ExponentSpec::default(),
            modes: Some(32),
            nodes: 64,
            grading: 2.0,
            tol: 1e-8,
            max_iter: 50,
            direction: FieldSpec::new(FieldKind::PerturbedTaylorGreen, 1.0),
            extra_probes: 0,
            factor: 4.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayParams {
    pub n: usize,
    #[serde(with = "katolab::exponent")]
    pub q: f64,
    pub modes: Option<usize>,
    pub tolerance: f64,
    pub min_r2: f64,
}

impl Default for DecayParams {
    fn default() -> Self {
        Self {
            n: 3,
            q: 6.0,
            modes: None,
            tolerance: 0.05,
            min_r2: 0.98,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HlParams {
    #[serde(with = "katolab::exponent")]
    pub q: f64,
    pub beta: f64,
    #[serde(with = "katolab::exponent")]
    pub p: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for HlParams {
    fn default() -> Self {
        Self {
            q: f64::INFINITY,
            beta: 0.75,
            p: f64::INFINITY,
            alpha: 0.25,
            gamma: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdmissibilityParams {
    pub condition: Condition,
    pub alpha: f64,
    #[serde(with = "katolab::exponent")]
    pub p: f64,
    /// Added to the critical power of the weights.
    pub excess: f64,
    pub dims: Vec<usize>,
    pub random_probes: usize,
    pub max_drift: f64,
}

impl Default for AdmissibilityParams {
    fn default() -> Self {
        Self {
            condition: Condition::A1,
            alpha: 0.125,
            p: 8.0,
            excess: 0.0,
            dims: vec![64, 512],
            random_probes: 4,
            max_drift: 2.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterpParams {
    pub theta: f64,
    #[serde(with = "katolab::exponent")]
    pub p: f64,
    pub dims: Vec<usize>,
    pub models: usize,
    pub probes: usize,
    pub spectrum_min: f64,
    pub spectrum_max: f64,
    pub max_drift: f64,
}

impl Default for InterpParams {
    fn default() -> Self {
        Self {
            theta: 0.5,
            p: 2.0,
            dims: vec![64, 512],
            models: 10,
            probes: 2,
            spectrum_min: 1e-3,
            spectrum_max: 1e3,
            max_drift: 2.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsParams {
    pub n: usize,
    pub modes: Option<usize>,
    pub field: FieldSpec,
    pub spaces: Vec<SpaceTag>,
}

impl Default for NormsParams {
    fn default() -> Self {
        Self {
            n: 2,
            modes: None,
            field: FieldSpec::new(FieldKind::TaylorGreen, 1.0),
            spaces: vec![
                SpaceTag::Lq { q: 2.0 },
                SpaceTag::Lq { q: 6.0 },
                SpaceTag::WeakLq { q: 6.0 },
                SpaceTag::HomBesov {
                    s: -2.0 / 3.0,
                    q: 6.0,
                    p: f64::INFINITY,
                },
            ],
        }
    }
}

/// Default modes per axis by dimension.
pub fn default_modes(n: usize) -> usize {
    if n == 3 {
        32
    } else {
        64
    }
}

pub fn parse(text: &str) -> anyhow::Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).context("malformed configuration")?;
    if cfg.schema_version != SCHEMA_VERSION {
        bail!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            cfg.schema_version
        );
    }
    Ok(cfg)
}
