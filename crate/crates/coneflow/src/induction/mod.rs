//! Random coset representatives from masks of cone vertices, and the
//! cocycle they induce from a peripheral cocycle.

mod hmodel;
mod induced;
mod proper;
mod reps;

use alloc::string::String;
use core::fmt;

pub use hmodel::{builtin_h_cocycle, HCocycleKind, HCocycleModel, HVector};
pub use induced::{InducedCocycleValue, InducedIdentityCheck, Induction};
pub use proper::{Contribution, ProbeRow, PropernessProbe};
pub use reps::{
    almost_invariance_report, bass_serre_cosets, coset_keys_within, coset_reps_from_flow, cone_keys,
    free_product_baseline, l1_distance, translate_measure, AlmostInvarianceReport, ElementMeasure, RandomCosetReps,
};

use crate::fine_graph::GeomError;
use crate::group_models::CosetKey;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InductionError {
    Geom(GeomError),
    /// A measure for this coset is needed but was not computed.
    MissingCoset(CosetKey),
    /// An argument of the peripheral cocycle left the subgroup.
    OutsideSubgroup { element: String },
    Unsupported(String),
}

impl From<GeomError> for InductionError {
    fn from(e: GeomError) -> Self {
        InductionError::Geom(e)
    }
}

impl fmt::Display for InductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InductionError::Geom(e) => write!(f, "{e}"),
            InductionError::MissingCoset(k) => write!(f, "no measure for coset {:?} of subgroup {}", k.rep.word(), k.index),
            InductionError::OutsideSubgroup { element } => {
                write!(f, "cocycle argument {element} is outside the peripheral subgroup")
            }
            InductionError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl core::error::Error for InductionError {}
