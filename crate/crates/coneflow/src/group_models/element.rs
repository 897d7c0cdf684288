use alloc::vec::Vec;
use core::cmp::Ordering;

/// A generator or its inverse, indexed globally in the owning model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub const fn new(gen: u32, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub const fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }
}

/// A group element stored as its canonical word.
///
/// Only models produce values of this type, so two elements of the same
/// model are equal exactly when their words are equal. Ordering is shortlex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    word: Vec<Letter>,
}

impl GroupElement {
    pub const fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub(crate) fn from_canonical(word: Vec<Letter>) -> Self {
        GroupElement { word }
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Length of the canonical word, which is the word length for every
    /// built-in model.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
