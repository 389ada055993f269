use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{space_norm, SpaceTag};
use crate::spectral::{Grid, SpectralField};
use crate::Result;

/// A computed norm with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub space: SpaceTag,
    pub value: f64,
    pub grid: Grid,
    pub estimator: String,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

fn estimator(tag: &SpaceTag) -> &'static str {
    match tag {
        SpaceTag::Lq { .. } => "riemann-sum",
        SpaceTag::WeakLq { .. } => "discrete-rearrangement",
        SpaceTag::Besov { .. } | SpaceTag::Hoelder { .. } => "littlewood-paley-inhomogeneous",
        SpaceTag::HomBesov { .. } | SpaceTag::WeakBesov { .. } => "littlewood-paley-homogeneous",
        SpaceTag::Morrey { .. } => "grid-centres-dyadic-radii",
        SpaceTag::HomSobolev { .. } => "spectral-lift",
    }
}

pub fn norm_report(f: &SpectralField, tag: &SpaceTag) -> Result<NormReport> {
    tag.validate(f.grid().n)?;
    Ok(NormReport {
        space: *tag,
        value: space_norm(f, tag)?,
        grid: f.grid(),
        estimator: estimator(tag).to_string(),
        constants: BTreeMap::new(),
    })
}
