use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::hmodel::{HCocycleModel, HVector};
use super::reps::{ElementMeasure, RandomCosetReps};
use super::InductionError;
use crate::group_models::{CosetKey, GroupElement, GroupModel, PeripheralStructure};

/// Group data shared by the induced-cocycle computations.
#[derive(Clone, Copy)]
pub struct Induction<'a> {
    pub model: &'a GroupModel,
    pub periph: &'a PeripheralStructure,
    pub reps: &'a RandomCosetReps,
    pub hmodel: &'a HCocycleModel,
}

/// `C_γ` stored at the canonical representative of each coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedCocycleValue {
    pub gamma: GroupElement,
    pub values: BTreeMap<CosetKey, HVector>,
    /// Cosets where a needed measure is missing.
    pub frontier: Vec<CosetKey>,
}

impl<'a> Induction<'a> {
    pub fn new(
        model: &'a GroupModel,
        periph: &'a PeripheralStructure,
        reps: &'a RandomCosetReps,
        hmodel: &'a HCocycleModel,
    ) -> Self {
        Induction { model, periph, reps, hmodel }
    }

    fn key(&self, g: &GroupElement) -> CosetKey {
        self.periph.coset_key(self.model, self.reps.peripheral, g)
    }

    fn measure(&self, g: &GroupElement) -> Result<&'a ElementMeasure, InductionError> {
        let key = self.key(g);
        self.reps.get(&key).ok_or(InductionError::MissingCoset(key))
    }

    /// `Σ_x m(x)·c(g⁻¹·shift·x)`.
    fn average(
        &self,
        g_inv: &GroupElement,
        shift: &GroupElement,
        m: &ElementMeasure,
    ) -> Result<HVector, InductionError> {
        let mut out = HVector::zero();
        for (x, w) in m {
            let h = self.model.multiply(g_inv, &self.model.multiply(shift, x));
            out.add_scaled(&self.hmodel.value_checked(self.model, self.periph, &h)?, w);
        }
        Ok(out)
    }

    /// The potential `d(g) = Σ_x ν^{gH}(x)·c(g⁻¹x)`.
    pub fn potential(&self, g: &GroupElement) -> Result<HVector, InductionError> {
        let g_inv = self.model.inverse(g);
        self.average(&g_inv, &self.model.identity(), self.measure(g)?)
    }

    /// `C_γ(g)` at any group element.
    pub fn value_at(&self, gamma: &GroupElement, g: &GroupElement) -> Result<HVector, InductionError> {
        let g_inv = self.model.inverse(g);
        let here = self.measure(g)?;
        let back = self.measure(&self.model.multiply(&self.model.inverse(gamma), g))?;
        let first = self.average(&g_inv, &self.model.identity(), here)?;
        let second = self.average(&g_inv, gamma, back)?;
        Ok(first.minus(&second))
    }

    /// `C_γ` on the canonical representatives of `keys`.
    pub fn induced_cocycle(
        &self,
        gamma: &GroupElement,
        keys: &[CosetKey],
    ) -> Result<InducedCocycleValue, InductionError> {
        let mut out = InducedCocycleValue { gamma: gamma.clone(), values: BTreeMap::new(), frontier: Vec::new() };
        for key in keys {
            match self.value_at(gamma, &self.periph.canonical_rep(key)) {
                Ok(v) => {
                    out.values.insert(key.clone(), v);
                }
                Err(InductionError::MissingCoset(_)) => out.frontier.push(key.clone()),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// `C_γ(g)` from the stored value at the representative of `gH`, using
    /// `C_γ(rep·h) = π_H(h⁻¹)C_γ(rep)`.
    pub fn reconstruct(&self, value: &InducedCocycleValue, g: &GroupElement) -> Option<HVector> {
        let key = self.key(g);
        let stored = value.values.get(&key)?;
        let h = self.model.multiply(&self.model.inverse(&self.periph.canonical_rep(&key)), g);
        Some(self.hmodel.act(&self.model.inverse(&h), stored))
    }

    /// Checks, at the representative `g` of every key,
    /// `C_{γ1γ2}(g) = C_{γ1}(g) + C_{γ2}(γ1⁻¹g)`,
    /// `C_{γ1}(g) = d(g) − d(γ1⁻¹g)` and
    /// `C_{γ1}(gh) = π_H(h⁻¹)C_{γ1}(g)` for each sampled `h ∈ H`.
    pub fn verify_identities(
        &self,
        gamma1: &GroupElement,
        gamma2: &GroupElement,
        keys: &[CosetKey],
        h_samples: &[GroupElement],
    ) -> Result<InducedIdentityCheck, InductionError> {
        let g12 = self.model.multiply(gamma1, gamma2);
        let g1_inv = self.model.inverse(gamma1);
        let mut out = InducedIdentityCheck::default();
        for key in keys {
            let g = self.periph.canonical_rep(key);
            let back = self.model.multiply(&g1_inv, &g);
            let terms = (|| -> Result<_, InductionError> {
                Ok((
                    self.value_at(&g12, &g)?,
                    self.value_at(gamma1, &g)?,
                    self.value_at(gamma2, &back)?,
                    self.potential(&g)?,
                    self.potential(&back)?,
                ))
            })();
            let (lhs, first, second, d_here, d_back) = match terms {
                Ok(t) => t,
                Err(InductionError::MissingCoset(_)) => {
                    out.skipped.push(key.clone());
                    continue;
                }
                Err(e) => return Err(e),
            };
            out.checked += 1;
            if lhs != first.plus(&second) && out.cocycle_witness.is_none() {
                out.cocycle_witness = Some(key.clone());
            }
            if first != d_here.minus(&d_back) && out.potential_witness.is_none() {
                out.potential_witness = Some(key.clone());
            }
            for h in h_samples {
                if !self.periph.contains(self.model, self.reps.peripheral, h) {
                    return Err(InductionError::OutsideSubgroup { element: self.model.format(h) });
                }
                let gh = self.model.multiply(&g, h);
                let moved = match self.value_at(gamma1, &gh) {
                    Ok(v) => v,
                    Err(InductionError::MissingCoset(_)) => continue,
                    Err(e) => return Err(e),
                };
                out.equivariance_checks += 1;
                if moved != self.hmodel.act(&self.model.inverse(h), &first) && out.equivariance_witness.is_none() {
                    out.equivariance_witness = Some((key.clone(), h.clone()));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InducedIdentityCheck {
    pub checked: usize,
    pub equivariance_checks: usize,
    pub skipped: Vec<CosetKey>,
    pub cocycle_witness: Option<CosetKey>,
    pub potential_witness: Option<CosetKey>,
    pub equivariance_witness: Option<(CosetKey, GroupElement)>,
}

impl InducedIdentityCheck {
    pub fn holds(&self) -> bool {
        self.cocycle_witness.is_none() && self.potential_witness.is_none() && self.equivariance_witness.is_none()
    }
}
