use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A finitely supported probability measure on the vertices of a ball,
/// with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseMeasure {
    mass: BTreeMap<u32, BigRational>,
}

impl SparseMeasure {
    pub fn dirac(v: u32) -> Self {
        SparseMeasure { mass: BTreeMap::from([(v, BigRational::one())]) }
    }

    /// Uniform measure on a nonempty set.
    pub fn uniform(support: &[u32]) -> Self {
        assert!(!support.is_empty(), "uniform measure on an empty set");
        let w = BigRational::new(BigInt::one(), BigInt::from(support.len()));
        SparseMeasure { mass: support.iter().map(|&v| (v, w.clone())).collect() }
    }

    /// Builds a measure from weights, dropping zeros.
    pub fn from_weights(weights: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut m = SparseMeasure::default();
        for (v, w) in weights {
            m.add(v, &w);
        }
        m
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
    pub fn add_scaled(&mut self, other: &SparseMeasure, w: &BigRational) {
        for (&v, m) in &other.mass {
            self.add(v, &(m * w));
        }
    }

    pub fn get(&self, v: u32) -> BigRational {
        self.mass.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn is_probability(&self) -> bool {
        !self.mass.is_empty()
            && self.mass.values().all(|w| *w > BigRational::zero())
            && self.total().is_one()
    }

    pub fn support(&self) -> Vec<u32> {
        self.mass.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.mass.iter().map(|(&v, w)| (v, w))
    }

    /// Push-forward along a map of vertices.
    pub fn push_forward(&self, mut f: impl FnMut(u32) -> u32) -> SparseMeasure {
        let mut out = SparseMeasure::default();
        for (&v, w) in &self.mass {
            out.add(f(v), w);
        }
        out
    }
}

impl fmt::Display for SparseMeasure {
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
