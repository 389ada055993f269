use anyhow::{bail, Context};
use serde::Serialize;
use serde_json::{json, Value};

use katolab::estimates::{
    admissibility_doubling, hardy_littlewood_bound_probe, hl_scaling_residual, TorusDecaySetting, Verdict,
    EXTENSION_SCALES,
};
use katolab::interp::equivalence_study;
use katolab::kato::{
    compare_threshold, picard_solve, reference_solve_at, ExponentConfig, KatoConfig, ReferenceOptions,
};
use katolab::probes::{perturbed_taylor_green, random_solenoidal, rng, taylor_green};
use katolab::spaces::norm_report;
use katolab::spectral::io::write_field;
use katolab::spectral::{Grid, SpectralField};
use katolab::time::write_trajectory;
use katolab::Error;

use crate::config::*;
use crate::output::Artifacts;

/// One check performed when a configuration is loaded.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub check: String,
    pub residual: Option<f64>,
    pub ok: bool,
    /// Scaling identities may be waived by `expect_failure`; range checks not.
    pub waivable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Diagnostic {
    fn range(check: &str, res: Result<(), String>) -> Self {
        Self {
            check: check.to_string(),
            residual: None,
            ok: res.is_ok(),
            waivable: false,
            message: res.err(),
        }
    }

    fn identity(check: &str, residual: f64, ok: bool) -> Self {
        Self {
            check: check.to_string(),
            residual: Some(residual),
            ok,
            waivable: true,
            message: None,
        }
    }
}

fn exponent_diagnostics(spec: &ExponentSpec) -> Vec<Diagnostic> {
    let e = match spec.resolve() {
        Ok(e) => e,
        Err(err) => return vec![Diagnostic::range("exponents", Err(err.to_string()))],
    };
    let mut out = vec![Diagnostic::range("ranges", e.validate(true).map_err(|x| x.to_string()))];
    out.extend(
        e.residuals()
            .into_iter()
            .map(|r| Diagnostic::identity(&r.identity, r.residual, r.ok)),
    );
    out
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Range checks and scaling identities of a configuration.
pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    match &cfg.command {
        Command::Solve(s) => {
            let mut d = exponent_diagnostics(&s.exponents);
            d.push(Diagnostic::range(
                "solver settings",
                require(s.tol > 0.0 && s.max_iter > 0 && s.nodes >= 2, "need tol > 0, max_iter > 0, nodes >= 2"),
            ));
            d
        }
        Command::Threshold(t) => {
            let mut d = exponent_diagnostics(&t.exponents);
            d.push(Diagnostic::range("factor", require(t.factor > 1.0, "factor must exceed 1")));
            d
        }
        Command::VerifyDecay(p) => vec![Diagnostic::range(
            "decay exponents",
            require(
                (p.n == 2 || p.n == 3) && p.q > 2.0 && p.q.is_finite(),
                format!("need n in {{2, 3}} and 2 < q < inf, got n = {}, q = {}", p.n, p.q),
            ),
        )],
        Command::VerifyHl(h) => {
            let r = hl_scaling_residual(h.q, h.beta, h.p, h.alpha, h.gamma);
            vec![
                Diagnostic::range(
                    "indices",
                    require(
                        h.q >= 1.0 && h.p >= h.q && h.gamma > 0.0 && h.gamma < 1.0,
                        "need 1 <= q <= p and 0 < gamma < 1",
                    ),
                ),
                Diagnostic::identity("1 + alpha - beta - gamma = 1/q - 1/p", r, r.abs() <= 1e-12),
            ]
        }
        Command::VerifyAdmissibility(a) => vec![
            Diagnostic::range(
                "dimensions",
                require(a.dims.len() >= 2 && a.dims.iter().all(|&d| d >= 1), "need at least two dimensions"),
            ),
            Diagnostic::identity("weights at the critical power", a.excess, a.excess == 0.0),
        ],
        Command::VerifyInterp(i) => vec![Diagnostic::range(
            "interpolation parameters",
            require(
                i.theta > 0.0
                    && i.theta < 1.0
                    && i.p >= 1.0
                    && !i.dims.is_empty()
                    && i.models > 0
                    && i.probes > 0
                    && i.spectrum_min > 0.0
                    && i.spectrum_max > i.spectrum_min,
                "need 0 < theta < 1, p >= 1, nonempty dims, models, probes and 0 < min < max",
            ),
        )],
        Command::Norms(n) => n
            .spaces
            .iter()
            .map(|s| Diagnostic::range(&s.label(), s.validate(n.n).map_err(|e| e.to_string())))
            .collect(),
    }
}

/// Result of a run before it is written out.
pub struct Outcome {
    /// `None` for commands without an estimate check.
    pub passed: Option<bool>,
    pub result: Value,
}

/// Exit status for an outcome: 2 when the check disagrees with what was
/// expected (pass, or fail under `expect_failure`).
pub fn exit_code(cfg: &ExperimentConfig, outcome: &Outcome) -> i32 {
    match outcome.passed {
        Some(p) if p == cfg.expect_failure => 2,
        _ => 0,
    }
}

pub fn execute(cfg: &ExperimentConfig, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let diagnostics = validate(cfg);
    if let Some(bad) = diagnostics
        .iter()
        .find(|d| !d.ok && !(d.waivable && cfg.expect_failure))
    {
        bail!(ConfigError(format!(
            "{} failed{}",
            bad.check,
            bad.message
                .as_ref()
                .map(|m| format!(": {m}"))
                .or(bad.residual.map(|r| format!(" with residual {r:e}")))
                .unwrap_or_default()
        )));
    }
    let mut out = match &cfg.command {
        Command::Solve(p) => solve(cfg, p, art)?,
        Command::Threshold(p) => threshold(cfg, p, art)?,
        Command::VerifyDecay(p) => decay(p, art)?,
        Command::VerifyHl(p) => hl(p, art)?,
        Command::VerifyAdmissibility(p) => admissibility(cfg, p, art)?,
        Command::VerifyInterp(p) => interp(cfg, p, art)?,
        Command::Norms(p) => norms(cfg, p, art)?,
    };
    if let Value::Object(map) = &mut out.result {
        map.insert("validation".into(), serde_json::to_value(&diagnostics)?);
    }
    Ok(out)
}

/// Marks errors caused by the configuration itself.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:e}")
    }
}

fn build_field(spec: &FieldSpec, grid: Grid, seed: u64) -> SpectralField {
    match spec.kind {
        FieldKind::Zero => SpectralField::zero_vector(grid),
        FieldKind::TaylorGreen => taylor_green(grid, spec.amplitude),
        FieldKind::PerturbedTaylorGreen => perturbed_taylor_green(grid, spec.amplitude),
        FieldKind::Random => random_solenoidal(grid, spec.kmax, 2.0, &mut rng(seed)).scale(spec.amplitude),
    }
}

fn kato_config(e: ExponentConfig, nodes: usize, grading: f64, tol: f64, max_iter: usize) -> KatoConfig {
    let mut k = KatoConfig::new(e);
    k.nodes = nodes;
    k.grading = grading;
    k.tol = tol;
    k.max_iter = max_iter;
    k
}

fn solve(cfg: &ExperimentConfig, p: &SolveParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let e = p.exponents.resolve()?;
    let grid = Grid::new(e.n, p.modes.unwrap_or_else(|| default_modes(e.n)))?;
    let mut kc = kato_config(e, p.nodes, p.grading, p.tol, p.max_iter);
    kc.eta_bilinear = p.eta_bilinear;
    let u0 = build_field(&p.initial, grid, cfg.seed);
    let mut buf = Vec::new();
    write_field(&mut buf, &u0)?;
    art.write_bytes("initial.field", &buf)?;
    let sol = match picard_solve(&u0, None, &kc) {
        Ok(s) => s,
        Err(Error::Divergence { reason, diagnostics }) => {
            art.write_json("diagnostics.json", &diagnostics)?;
            return Ok(Outcome {
                passed: Some(false),
                result: json!({ "converged": false, "reason": reason, "diagnostics": diagnostics }),
            });
        }
        Err(Error::NoConvergence { diagnostics, .. }) => {
            art.write_json("diagnostics.json", &diagnostics)?;
            return Ok(Outcome {
                passed: Some(false),
                result: json!({ "converged": false, "reason": "iteration limit reached", "diagnostics": diagnostics }),
            });
        }
        Err(err) => return Err(err.into()),
    };
    art.write_json("diagnostics.json", &sol.diagnostics)?;
    let mut buf = Vec::new();
    write_trajectory(&mut buf, &sol.x)?;
    art.write_bytes("trajectory.bin", &buf)?;
    let xs = sol.x.node_norms(&e.data_space())?;
    let zs = sol.x.node_norms(&e.space())?;
    let rows: Vec<Vec<String>> = sol
        .x
        .times()
        .iter()
        .zip(xs.iter().zip(&zs))
        .map(|(&t, (&x, &z))| vec![num(t), num(x), num(z), num(t.powf(e.alpha) * z)])
        .collect();
    art.write_csv("norms.csv", &["t", "norm_x", "norm_z", "weighted_norm_z"], &rows)?;
    let mut passed = sol.diagnostics.converged;
    let mut reference = Value::Null;
    if let Some(t) = p.reference_time {
        let times = kc.time_grid()?;
        let j = times.nearest(t);
        let tj = times.nodes()[j];
        let mut opts = ReferenceOptions::new(p.reference_dt);
        opts.nu = e.shift();
        let r = reference_solve_at(&u0, None, &[tj], opts)?;
        let diff = sol.x.fields[j].sub(&r[0])?.l2_norm();
        let scale = r[0].l2_norm();
        let rel = if scale > 0.0 { diff / scale } else { diff };
        passed &= rel <= 1e-5;
        reference = json!({ "t": tj, "relative_l2_distance": rel, "tolerance": 1e-5 });
    }
    Ok(Outcome {
        passed: Some(passed),
        result: json!({
            "converged": sol.diagnostics.converged,
            "iterations": sol.diagnostics.iterations,
            "y_norm": sol.diagnostics.y_norm,
            "z_norm": sol.diagnostics.e_norms.last(),
            "residual": sol.diagnostics.residual,
            "max_l2": sol.x.fields.iter().map(|f| f.l2_norm()).fold(0.0, f64::max),
            "reference": reference,
        }),
    })
}

fn threshold(cfg: &ExperimentConfig, p: &ThresholdParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let e = p.exponents.resolve()?;
    let grid = Grid::new(e.n, p.modes.unwrap_or_else(|| default_modes(e.n)))?;
    let kc = kato_config(e, p.nodes, p.grading, p.tol, p.max_iter);
    let dir = build_field(&p.direction, grid, cfg.seed);
    let c = compare_threshold(&dir, &kc, p.extra_probes, cfg.seed)?;
    let rows: Vec<Vec<String>> = c
        .report
        .samples
        .iter()
        .map(|s| vec![num(s.amplitude), (s.converged as u8).to_string(), s.iterations.to_string()])
        .collect();
    art.write_csv("samples.csv", &["amplitude", "converged", "iterations"], &rows)?;
    let passed = c.report.direction_norm == 0.0
        || (c.within(p.factor) && c.report.monotone && c.report.samples.len() >= 10);
    Ok(Outcome {
        passed: Some(passed),
        result: json!({
            "eta": c.eta,
            "unit_free_norm": c.unit_free_norm,
            "predicted": c.predicted,
            "measured": c.report.threshold,
            "upper": c.report.upper,
            "ratio": c.ratio,
            "factor": p.factor,
            "monotone": c.report.monotone,
            "samples": c.report.samples.len(),
        }),
    })
}

fn decay(p: &DecayParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let setting = match p.modes {
        Some(m) => TorusDecaySetting::with_grid(Grid::new(p.n, m)?, p.q)?,
        None => TorusDecaySetting::new(p.n, p.q)?,
    };
    let expected = setting.expected_gamma();
    let (fit, times, ratios) = match setting.run() {
        Ok(f) => {
            let (t, r) = (f.times.clone(), f.ratios.clone());
            (Some(f), t, r)
        }
        Err(Error::FitUnreliable { times, ratios, .. }) => (None, times, ratios),
        Err(e) => return Err(e.into()),
    };
    let rows: Vec<Vec<String>> = times.iter().zip(&ratios).map(|(t, r)| vec![num(*t), num(*r)]).collect();
    art.write_csv("decay.csv", &["t", "ratio"], &rows)?;
    let passed = fit
        .as_ref()
        .is_some_and(|f| (f.gamma - expected).abs() <= p.tolerance && f.r2 >= p.min_r2);
    Ok(Outcome {
        passed: Some(passed),
        result: json!({
            "n": p.n,
            "q": p.q,
            "modes": setting.grid.modes,
            "gamma_fit": fit.as_ref().map(|f| f.gamma),
            "gamma_expected": expected,
            "r2": fit.as_ref().map(|f| f.r2),
            "tolerance": p.tolerance,
            "probes": setting.probes.len(),
        }),
    })
}

fn hl(p: &HlParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let r = hardy_littlewood_bound_probe(p.q, p.beta, p.p, p.alpha, p.gamma)?;
    let rows: Vec<Vec<String>> = EXTENSION_SCALES
        .iter()
        .zip(&r.ratio_sup)
        .map(|(d, v)| vec![num(*d), num(*v)])
        .collect();
    art.write_csv("extension.csv", &["scale", "ratio_sup"], &rows)?;
    Ok(Outcome {
        passed: Some(r.verdict == Verdict::Stable),
        result: json!({ "verdict": r.verdict, "growth": r.growth, "report": r }),
    })
}

fn admissibility(cfg: &ExperimentConfig, p: &AdmissibilityParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let s = admissibility_doubling(p.condition, p.alpha, p.p, p.excess, &p.dims, p.random_probes, cfg.seed)?;
    let mut header = vec!["dim".to_string()];
    header.extend(s.rows[0].values.iter().map(|(n, _)| n.clone()));
    let rows: Vec<Vec<String>> = s
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.dim.to_string()];
            v.extend(r.values.iter().map(|(_, x)| num(*x)));
            v
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    art.write_csv("doubling.csv", &header, &rows)?;
    let finite = s.jointly_finite(p.max_drift);
    let divergent = s.jointly_divergent(p.max_drift);
    Ok(Outcome {
        passed: Some(finite),
        result: json!({
            "verdict": if finite { "finite" } else if divergent { "divergent" } else { "mixed" },
            "study": s,
        }),
    })
}

fn interp(cfg: &ExperimentConfig, p: &InterpParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let s = equivalence_study(
        p.theta,
        p.p,
        &p.dims,
        p.models,
        p.probes,
        (p.spectrum_min, p.spectrum_max),
        cfg.seed,
    )?;
    let rows: Vec<Vec<String>> = s
        .records
        .iter()
        .map(|r| {
            let mut v = vec![r.dim.to_string()];
            for i in &r.intervals {
                v.push(num(i.lo));
                v.push(num(i.hi));
            }
            v.extend([num(r.embedding_worst), num(r.reiteration_lo), num(r.reiteration_hi)]);
            v
        })
        .collect();
    art.write_csv(
        "intervals.csv",
        &[
            "dim", "kr_lo", "kr_hi", "ks_lo", "ks_hi", "rs_lo", "rs_hi", "embedding_worst", "reiteration_lo",
            "reiteration_hi",
        ],
        &rows,
    )?;
    Ok(Outcome {
        passed: Some(s.passed(p.max_drift)),
        result: json!({ "drift": s.drift, "reiteration_drift": s.reiteration_drift, "study": s }),
    })
}

fn norms(cfg: &ExperimentConfig, p: &NormsParams, art: &mut Artifacts) -> anyhow::Result<Outcome> {
    let grid = Grid::new(p.n, p.modes.unwrap_or_else(|| default_modes(p.n)))?;
    let f = build_field(&p.field, grid, cfg.seed);
    let reports = p
        .spaces
        .iter()
        .map(|s| norm_report(&f, s).with_context(|| format!("norm {}", s.label())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| vec![format!("\"{}\"", r.space.label()), num(r.value)])
        .collect();
    art.write_csv("norms.csv", &["space", "value"], &rows)?;
    let mut buf = Vec::new();
    write_field(&mut buf, &f)?;
    art.write_bytes("field.field", &buf)?;
    Ok(Outcome {
        passed: None,
        result: json!({ "reports": reports }),
    })
}
