//! Computable norms on grid fields: Lebesgue, weak Lebesgue, Littlewood–Paley
//! based Besov and Hölder, homogeneous Sobolev and Morrey.
//!
//! Vector fields are measured through the pointwise Euclidean magnitude.

mod lebesgue;
mod lp;
mod morrey;
mod report;
mod tag;

pub use lebesgue::{lebesgue_norm, lebesgue_norm_of_samples, weak_lebesgue_norm, weak_norm_of_samples};
pub use lp::{
    besov_norm, bump, hoelder_norm, littlewood_paley, littlewood_paley_inhomogeneous, InnerNorm,
    LPDecomposition,
};
pub use morrey::{morrey_norm, morrey_norm_of_samples};
pub use report::{norm_report, NormReport};
pub use tag::SpaceTag;

use crate::spectral::{fractional_laplacian, SpectralField};
use crate::Result;

/// `‖(−Δ)^{s/2} f‖` in `L^q`, or in weak `L^q` when `weak` is set.
pub fn hom_sobolev_norm(f: &SpectralField, s: f64, q: f64, weak: bool) -> Result<f64> {
    let lifted = fractional_laplacian(f, s / 2.0)?;
    if weak {
        weak_lebesgue_norm(&lifted, q)
    } else {
        lebesgue_norm(&lifted, q)
    }
}

/// Evaluates the norm named by `tag`.
pub fn space_norm(f: &SpectralField, tag: &SpaceTag) -> Result<f64> {
    match *tag {
        SpaceTag::Lq { q } => lebesgue_norm(f, q),
        SpaceTag::WeakLq { q } => weak_lebesgue_norm(f, q),
        SpaceTag::Besov { s, q, p } => besov_norm(f, s, InnerNorm::Lebesgue(q), p, false),
        SpaceTag::HomBesov { s, q, p } => besov_norm(f, s, InnerNorm::Lebesgue(q), p, true),
        SpaceTag::WeakBesov { s, q, p } => besov_norm(f, s, InnerNorm::Weak(q), p, true),
        SpaceTag::Hoelder { eps } => hoelder_norm(f, eps),
        SpaceTag::Morrey { q, lambda } => morrey_norm(f, q, lambda),
        SpaceTag::HomSobolev { s, q, weak } => hom_sobolev_norm(f, s, q, weak),
    }
}
