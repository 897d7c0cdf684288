//! Symmetric differences of masks, confluence, and the cocycle
//! `c(g)(a) = μ₁(a) − μ_g(a)` with its ℓ^p norms.
//!
//! All measure arithmetic is exact. Only `p`-th powers of norms and the
//! fitted constants are floating point.

mod checkpoint;
mod confluence;
mod fit;
mod norms;
mod signed;
mod translate;
mod value;

pub use checkpoint::{checkpoint_test, kappa_fit, CheckpointOutcome, KappaExclusion, KappaReport, KappaRow};
pub use confluence::{
    confluence_decay_report, is_beta_confluent, non_confluence_check, ConfluenceCheck, DecayReport,
    NonConfluenceCase,
};
pub use fit::LineFit;
pub use norms::{lp_norm, theta_and_dprime, witness_census, AngleDistance, ExpFit, NormReport, Shell, WitnessCensus};
pub use signed::{meet, norm, sym_diff, SignedMeasure};
pub use translate::Translator;
pub use value::{
    affine_apply, all_targets, cocycle_entry, cocycle_of, cocycle_value, verify_cocycle_identity, CocycleValue,
    IdentityCheck, WVector,
};
