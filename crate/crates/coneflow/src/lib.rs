#![no_std]
//! Geodesic flow on coned-off Cayley graphs.
//!
//! The crate builds finite, certified pieces of coned-off Cayley graphs of
//! free products and free groups relative to chosen subgroups, runs the
//! measure-valued geodesic flow on them with exact rational arithmetic, and
//! evaluates the resulting ℓ^p cocycles and induced cocycles.
//!
//! Every geometric quantity computed on a truncated graph comes with a
//! certificate: either the value is exactly the value in the infinite graph,
//! or the computation reports that it cannot decide.

extern crate alloc;

pub mod cocycle;
pub mod fine_graph;
pub mod geodesic_flow;
pub mod group_models;
pub mod induction;

pub use fine_graph::{Angle, Ball, ConstantsProfile, Geometry, OrientedEdge, Tri, Vertex};
pub use geodesic_flow::{Flow, Mask, SparseMeasure, StepKind};
pub use group_models::{CosetKey, GroupElement, GroupModel, GroupSpec, PeripheralStructure};
