use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::geodesic_flow::SparseMeasure;

/// A finitely supported function on vertices with rational values of any
/// sign, normed by ℓ¹.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignedMeasure {
    mass: BTreeMap<u32, BigRational>,
}

impl SignedMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `p − q`.
    pub fn difference(p: &SparseMeasure, q: &SparseMeasure) -> Self {
        let mut out = Self::from(p);
        out.add_scaled(&Self::from(q), &-BigRational::from_integer(1.into()));
        out
    }

    pub fn add(&mut self, v: u32, w: &BigRational) {
        if w.is_zero() {
            return;
        }
        let slot = self.mass.entry(v).or_insert_with(BigRational::zero);
        *slot += w;
        if slot.is_zero() {
            self.mass.remove(&v);
        }
    }

    /// `self += w · other`.
    pub fn add_scaled(&mut self, other: &SignedMeasure, w: &BigRational) {
        for (&v, m) in &other.mass {
            self.add(v, &(m * w));
        }
    }

    pub fn plus(&self, other: &SignedMeasure) -> SignedMeasure {
        let mut out = self.clone();
        for (&v, m) in &other.mass {
            out.add(v, m);
        }
        out
    }

    pub fn get(&self, v: u32) -> BigRational {
        self.mass.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn l1(&self) -> BigRational {
        self.mass.values().fold(BigRational::zero(), |acc, w| acc + w.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn support(&self) -> Vec<u32> {
        self.mass.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.mass.iter().map(|(&v, w)| (v, w))
    }

    /// Push-forward along a vertex map; `None` if some support point has no
    /// image.
    pub fn push_forward(&self, mut f: impl FnMut(u32) -> Option<u32>) -> Option<SignedMeasure> {
        let mut out = SignedMeasure::zero();
        for (&v, w) in &self.mass {
            out.add(f(v)?, w);
        }
        Some(out)
    }
}

impl From<&SparseMeasure> for SignedMeasure {
    fn from(m: &SparseMeasure) -> Self {
        let mut out = SignedMeasure::zero();
        for (v, w) in m.iter() {
            out.add(v, w);
        }
        out
    }
}

impl fmt::Display for SignedMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, w)) in self.mass.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: {w}")?;
        }
        write!(f, "}}")
    }
}

/// Pointwise minimum of two nonnegative measures.
pub fn meet(p: &SparseMeasure, q: &SparseMeasure) -> SparseMeasure {
    SparseMeasure::from_weights(p.iter().filter_map(|(v, w)| {
        let other = q.get(v);
        (!other.is_zero()).then(|| (v, w.clone().min(other)))
    }))
}

/// `p + q − 2·meet(p, q)`.
pub fn sym_diff(p: &SparseMeasure, q: &SparseMeasure) -> SparseMeasure {
    let m = meet(p, q);
    let mut out = p.clone();
    out.add_scaled(q, &BigRational::from_integer(1.into()));
    out.add_scaled(&m, &BigRational::from_integer((-2).into()));
    out
}

/// Total mass of a nonnegative measure.
pub fn norm(m: &SparseMeasure) -> BigRational {
    m.total()
}
