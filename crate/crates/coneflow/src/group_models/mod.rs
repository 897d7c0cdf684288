//! Group elements, normal forms and peripheral cosets for the built-in
//! model families: finite tables, free groups, free abelian groups and free
//! products of these.

mod element;
mod finite;
mod model;
mod parse;
mod peripheral;

use alloc::string::String;
use core::fmt;

pub use element::{GroupElement, Letter};
pub use finite::FiniteSpec;
pub use model::{make_model, GroupModel, GroupSpec};
pub use peripheral::{
    Block, BlockStructure, CosetKey, LocalGroup, Peripheral, PeripheralSpec, PeripheralStructure,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupError {
    MalformedTable(String),
    Parse(String),
    Unsupported(String),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::MalformedTable(m) => write!(f, "malformed group table: {m}"),
            GroupError::Parse(m) => write!(f, "cannot parse word: {m}"),
            GroupError::Unsupported(m) => write!(f, "unsupported group model: {m}"),
        }
    }
}

impl core::error::Error for GroupError {}

/// Free group on `a, b` relative to `⟨a⟩`.
pub fn free_rel_cyclic() -> (GroupModel, PeripheralStructure) {
    let model = GroupModel::new(&GroupSpec::free(&["a", "b"])).expect("valid model");
    let periph = PeripheralStructure::new(&model, &[PeripheralSpec::Generators(alloc::vec!["a".into()])])
        .expect("valid peripheral");
    (model, periph)
}

/// `Z/2 * Z/3` on `s, t` relative to both factors.
pub fn modular_rel_factors() -> (GroupModel, PeripheralStructure) {
    let model = GroupModel::new(&GroupSpec::FreeProduct(alloc::vec![
        GroupSpec::cyclic(2, "s"),
        GroupSpec::cyclic(3, "t"),
    ]))
    .expect("valid model");
    let periph =
        PeripheralStructure::new(&model, &[PeripheralSpec::Factor(0), PeripheralSpec::Factor(1)])
            .expect("valid peripherals");
    (model, periph)
}
