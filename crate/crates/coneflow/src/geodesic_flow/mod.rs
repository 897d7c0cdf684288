//! The flow toward a vertex on probability measures, and masks.
//!
//! For a target `a` and a vertex `x`, one step moves the Dirac mass at `x`
//! to the uniform measure on a slice of near-geodesics from `x` to `a`,
//! at a distance from `a` that is a multiple of `5δ`. Close to `a` the flow
//! either stops, jumps to the slice at distance one (when `a` has infinite
//! valence), or jumps to the first vertex of huge angle on the way. The
//! mask of `a` for `x` is the measure where iterating stops changing.

mod flow;
mod focus;
mod measure;

pub use flow::{Flow, Mask, StepKind, TraceStep};
pub use focus::{FocusItem, FocusReport};
pub use measure::SparseMeasure;
