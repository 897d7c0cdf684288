use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::InductionError;
use crate::group_models::{GroupElement, GroupModel, LocalGroup, PeripheralStructure};

/// A finitely supported vector of `ℓ^p(ℤ^d-indexed)`: index `(j, n)` is
/// position `n` of copy `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HVector {
    entries: BTreeMap<(u32, i64), BigRational>,
}

impl HVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: (u32, i64), w: &BigRational) {
        if w.is_zero() {
            return;
        }
        let slot = self.entries.entry(index).or_insert_with(BigRational::zero);
        *slot += w;
        if slot.is_zero() {
            self.entries.remove(&index);
        }
    }

    /// `self += w · other`.
    pub fn add_scaled(&mut self, other: &HVector, w: &BigRational) {
        for (&i, v) in &other.entries {
            self.add(i, &(v * w));
        }
    }

    pub fn plus(&self, other: &HVector) -> HVector {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::from_integer(1.into()));
        out
    }

    pub fn minus(&self, other: &HVector) -> HVector {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::from_integer((-1).into()));
        out
    }

    pub fn get(&self, index: (u32, i64)) -> BigRational {
        self.entries.get(&index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, i64), &BigRational)> {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn l1(&self) -> BigRational {
        self.entries.values().fold(BigRational::zero(), |acc, v| acc + v.abs())
    }

    pub fn lp(&self, p: f64) -> f64 {
        let s: f64 = self.entries.values().map(|v| libm::pow(libm::fabs(v.to_f64().unwrap_or(0.0)), p)).sum();
        libm::pow(s, 1.0 / p)
    }

    /// Shifts copy `j` by `shift[j]`.
    pub fn shifted(&self, shift: &[i64]) -> HVector {
        HVector {
            entries: self
                .entries
                .iter()
                .map(|(&(j, n), v)| ((j, n + shift.get(j as usize).copied().unwrap_or(0)), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, ((j, n), v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({j},{n}): {v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HCocycleKind {
    /// The zero cocycle.
    Finite,
    /// `ℤ` acting on `ℓ^p(ℤ)` by translation.
    Integers,
    /// The direct sum of `d` copies of the integer model.
    FreeAbelian(u32),
}

/// A proper cocycle of a peripheral subgroup, read off the exponent sums of
/// its generators.
#[derive(Clone, Debug, PartialEq)]
pub struct HCocycleModel {
    pub peripheral: usize,
    pub kind: HCocycleKind,
    /// Generator of the ambient model counted by each coordinate.
    pub gens: Vec<u32>,
    pub p: f64,
}

/// The standard cocycle of the given kind on peripheral `i`.
pub fn builtin_h_cocycle(
    periph: &PeripheralStructure,
    i: usize,
    kind: HCocycleKind,
    p: f64,
) -> Result<HCocycleModel, InductionError> {
    if i >= periph.len() {
        return Err(InductionError::Unsupported(format!("no peripheral subgroup {i}")));
    }
    let gens: Vec<u32> = match kind {
        HCocycleKind::Finite => Vec::new(),
        HCocycleKind::Integers | HCocycleKind::FreeAbelian(_) => {
            let d = match kind {
                HCocycleKind::FreeAbelian(d) => d as usize,
                _ => 1,
            };
            let rank_ok = match periph.local(i) {
                LocalGroup::Abelian { rank } => rank == d,
                LocalGroup::Free { rank } => rank == 1 && d == 1,
                LocalGroup::Finite { .. } => false,
            };
            let gens: Vec<u32> = periph.gen_set(i).map(|s| s.iter().copied().collect()).unwrap_or_default();
            if !rank_ok || gens.len() != d {
                return Err(InductionError::Unsupported(format!(
                    "peripheral {i} is {:?}, not free abelian of rank {d}",
                    periph.local(i)
                )));
            }
            gens
        }
    };
    Ok(HCocycleModel { peripheral: i, kind, gens, p })
}

impl HCocycleModel {
    /// Coordinates of `h ∈ H`.
    pub fn coords(&self, h: &GroupElement) -> Vec<i64> {
        let mut out = alloc::vec![0i64; self.gens.len()];
        for l in h.word() {
            if let Some(j) = self.gens.iter().position(|&g| g == l.gen) {
                out[j] += if l.inv { -1 } else { 1 };
            }
        }
        out
    }

    /// `c(h)`: on copy `j`, `+1` on `[0, n)` for `n > 0` and `−1` on
    /// `[n, 0)` for `n < 0`.
    pub fn value(&self, h: &GroupElement) -> HVector {
        let mut out = HVector::zero();
        let one = BigRational::from_integer(1.into());
        let minus = -one.clone();
        for (j, &n) in self.coords(h).iter().enumerate() {
            let (range, w) = if n >= 0 { (0..n, &one) } else { (n..0, &minus) };
            for k in range {
                out.add((j as u32, k), w);
            }
        }
        out
    }

    /// `π_H(h)v`.
    pub fn act(&self, h: &GroupElement, v: &HVector) -> HVector {
        v.shifted(&self.coords(h))
    }

    /// Norm on `V`.
    pub fn norm(&self, v: &HVector) -> f64 {
        v.lp(self.p)
    }

    /// `c(h)` after checking that `h` lies in the peripheral subgroup.
    pub fn value_checked(
        &self,
        model: &GroupModel,
        periph: &PeripheralStructure,
        h: &GroupElement,
    ) -> Result<HVector, InductionError> {
        if !periph.contains(model, self.peripheral, h) {
            return Err(InductionError::OutsideSubgroup { element: model.format(h) });
        }
        Ok(self.value(h))
    }
}
