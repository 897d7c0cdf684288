//! Finite pieces of coned-off Cayley graphs and synthetic graphs, with
//! certified distances, angles, cones and geodesic intervals.
//!
//! A [`Ball`] stores the truncated graph `B` together with its leak groups:
//! each connected component of the omitted part of the infinite graph is
//! summarised by the in-ball vertices adjacent to it. Adding one hub per
//! group gives an optimistic graph `B⁺` whose distances never exceed the
//! true ones, while distances in `B` never fall below them. Every query in
//! [`Geometry`] uses both graphs and reports a value only when they agree
//! well enough to decide it.

mod ball;
mod bfs;
mod blocks;
mod builder;
mod cone;
mod delta;
mod geometry;
mod leaks;
mod profile;
mod synthetic;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::group_models::{CosetKey, GroupElement};

pub use ball::Ball;
pub use builder::{build_ball, build_region, BuildError};
pub use cone::{Cone, ConeMode};
pub use delta::{estimate_delta, DeltaEstimate, DeltaMode};
pub use geometry::{AngleBound, DistBound, DistRow, Geometry, Interval};
pub use profile::ConstantsProfile;
pub use synthetic::{cycle, from_edge_list, path, to_edge_list, tree_from_parents, wheel_over_segment, EdgeListError};

/// Marker for "unreachable" in distance rows.
pub const INF: u32 = u32::MAX;

/// A vertex of a coned-off Cayley graph or of a synthetic graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Group(GroupElement),
    Cone(CosetKey),
    Id(u64),
}

/// An oriented edge between two in-ball vertices, by dense id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub o: u32,
    pub t: u32,
}

impl OrientedEdge {
    pub const fn new(o: u32, t: u32) -> Self {
        OrientedEdge { o, t }
    }

    pub const fn reversed(self) -> Self {
        OrientedEdge { o: self.t, t: self.o }
    }

    pub fn unoriented(self) -> (u32, u32) {
        if self.o <= self.t {
            (self.o, self.t)
        } else {
            (self.t, self.o)
        }
    }
}

/// A certified angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Angle {
    Finite(u64),
    /// Strictly larger than the cap.
    GreaterThanCap(u64),
    Infinite,
}

impl Angle {
    pub fn exceeds(self, theta: u64) -> Tri {
        match self {
            Angle::Finite(n) => Tri::from(n > theta),
            Angle::GreaterThanCap(c) if c >= theta => Tri::True,
            Angle::GreaterThanCap(_) => Tri::Unknown,
            Angle::Infinite => Tri::True,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Finite(n) => write!(f, "{n}"),
            Angle::GreaterThanCap(c) => write!(f, ">{c}"),
            Angle::Infinite => write!(f, "inf"),
        }
    }
}

/// Three-valued truth for comparisons against bounded quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl core::ops::Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Tri::True => Some(true),
            Tri::False => Some(false),
            Tri::Unknown => None,
        }
    }
}

/// Why a geometric computation did not produce a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    /// The truncated graph cannot decide the answer.
    Uncertified { reason: String, vertices: Vec<u32> },
    /// A statement that must hold in any hyperbolic fine graph failed.
    Violation { reason: String, vertices: Vec<u32> },
    /// The two vertices are not connected inside the graph.
    Disconnected { vertices: Vec<u32> },
    /// A loop guard fired.
    NoFixedPoint { vertices: Vec<u32> },
}

impl GeomError {
    pub fn uncertified(reason: &str, vertices: &[u32]) -> Self {
        GeomError::Uncertified { reason: reason.into(), vertices: vertices.to_vec() }
    }

    pub fn violation(reason: &str, vertices: &[u32]) -> Self {
        GeomError::Violation { reason: reason.into(), vertices: vertices.to_vec() }
    }

    pub fn is_uncertified(&self) -> bool {
        matches!(self, GeomError::Uncertified { .. })
    }

    pub fn vertices(&self) -> &[u32] {
        match self {
            GeomError::Uncertified { vertices, .. }
            | GeomError::Violation { vertices, .. }
            | GeomError::Disconnected { vertices }
            | GeomError::NoFixedPoint { vertices } => vertices,
        }
    }
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::Uncertified { reason, vertices } => {
                write!(f, "uncertified: {reason} at {vertices:?}")
            }
            GeomError::Violation { reason, vertices } => write!(f, "violation: {reason} at {vertices:?}"),
            GeomError::Disconnected { vertices } => write!(f, "disconnected: {vertices:?}"),
            GeomError::NoFixedPoint { vertices } => write!(f, "no fixed point: {vertices:?}"),
        }
    }
}

impl core::error::Error for GeomError {}
