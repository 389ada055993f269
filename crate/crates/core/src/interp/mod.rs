//! Real interpolation of weighted `ℓ²` couples and the equivalent resolvent
//! and semigroup norms on diagonal models.

mod checks;
mod couple;
mod forms;

pub use checks::{
    check_embedding_chain, check_reiteration, embedding_chains, equivalence_study, reiterated_norm, DimensionRecord,
    EmbeddingReport, EquivalenceStudy, ReiterationReport, RatioInterval,
};
pub use couple::{interp_constant, k_functional, normalized_interp_norm, real_interp_norm, WeightedCouple};
pub use forms::{
    normalized_resolvent_norm, normalized_semigroup_norm, resolvent_constant, resolvent_interp_norm,
    semigroup_constant, semigroup_interp_norm, MARGIN_DECADES, PER_DECADE,
};
