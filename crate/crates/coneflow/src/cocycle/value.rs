use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::signed::SignedMeasure;
use super::translate::Translator;
use crate::fine_graph::GeomError;
use crate::geodesic_flow::Flow;
use crate::group_models::GroupElement;

/// A finitely supported vector of the ℓ^p space: one signed measure per
/// target vertex.
pub type WVector = BTreeMap<u32, SignedMeasure>;

/// The cocycle of a source vertex relative to a base vertex, evaluated on a
/// set of targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleValue {
    pub base: u32,
    pub source: u32,
    /// `μ_base(a) − μ_source(a)` at every certified target, zero included.
    pub entries: WVector,
    /// Targets that could not be evaluated.
    pub excluded: Vec<(u32, GeomError)>,
}

impl CocycleValue {
    pub fn get(&self, a: u32) -> Option<&SignedMeasure> {
        self.entries.get(&a)
    }

    pub fn certified(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    /// Targets where a statement that must hold failed.
    pub fn violations(&self) -> impl Iterator<Item = &(u32, GeomError)> {
        self.excluded.iter().filter(|(_, e)| !e.is_uncertified())
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, &SignedMeasure)> {
        self.entries.iter().filter(|(_, m)| !m.is_zero()).map(|(&a, m)| (a, m))
    }
}

/// `μ_base(a) − μ_source(a)`.
pub fn cocycle_entry(flow: &mut Flow<'_>, base: u32, source: u32, a: u32) -> Result<SignedMeasure, GeomError> {
    if base == source {
        return Ok(SignedMeasure::zero());
    }
    let p = flow.mask(a, base)?;
    let q = flow.mask(a, source)?;
    Ok(SignedMeasure::difference(&p.measure, &q.measure))
}

/// The cocycle value of `source` on `targets`; uncertified targets are
/// listed instead of stored.
pub fn cocycle_value(flow: &mut Flow<'_>, base: u32, source: u32, targets: &[u32]) -> CocycleValue {
    let mut entries = WVector::new();
    let mut excluded = Vec::new();
    for &a in targets {
        match cocycle_entry(flow, base, source, a) {
            Ok(m) => {
                entries.insert(a, m);
            }
            Err(e) => excluded.push((a, e)),
        }
    }
    CocycleValue { base, source, entries, excluded }
}

/// Every vertex of the ball, the default target set.
pub fn all_targets(flow: &Flow<'_>) -> Vec<u32> {
    (0..flow.ball().len() as u32).collect()
}

fn source_id(tr: &Translator<'_>, g: &GroupElement) -> Result<u32, GeomError> {
    tr.id_of(g).ok_or_else(|| GeomError::uncertified("group element outside the ball", &[]))
}

/// `c(g)` on `targets` for a ball built around the identity.
pub fn cocycle_of(
    flow: &mut Flow<'_>,
    tr: &Translator<'_>,
    g: &GroupElement,
    targets: &[u32],
) -> Result<CocycleValue, GeomError> {
    let base = source_id(tr, &tr.model.identity())?;
    let source = source_id(tr, g)?;
    Ok(cocycle_value(flow, base, source, targets))
}

/// Outcome of checking the cocycle identity target by target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub checked: Vec<u32>,
    /// Targets where some term could not be certified.
    pub skipped: Vec<u32>,
    /// A target where both sides differ.
    pub witness: Option<u32>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// `g·(c(a))`: the value of `π(g)` applied to a vector, at target `a`.
fn translated_entry(
    flow: &mut Flow<'_>,
    tr: &Translator<'_>,
    g: &GroupElement,
    g_inv: &GroupElement,
    base: u32,
    source: u32,
    a: u32,
) -> Result<SignedMeasure, GeomError> {
    let Some(b) = tr.translate(g_inv, a) else {
        return Err(GeomError::uncertified("translate leaves the ball", &[a]));
    };
    let inner = cocycle_entry(flow, base, source, b)?;
    inner
        .push_forward(|v| tr.translate(g, v))
        .ok_or_else(|| GeomError::uncertified("translated support leaves the ball", &[a]))
}

/// Checks `c(g1g2)(a) = c(g1)(a) + g1·(c(g2)(g1⁻¹a))` exactly at each target.
pub fn verify_cocycle_identity(
    flow: &mut Flow<'_>,
    tr: &Translator<'_>,
    g1: &GroupElement,
    g2: &GroupElement,
    targets: &[u32],
) -> Result<IdentityCheck, GeomError> {
    let base = source_id(tr, &tr.model.identity())?;
    let g12 = tr.model.multiply(g1, g2);
    let s1 = source_id(tr, g1)?;
    let s2 = source_id(tr, g2)?;
    let s12 = source_id(tr, &g12)?;
    let g1_inv = tr.model.inverse(g1);
    let mut out = IdentityCheck { checked: Vec::new(), skipped: Vec::new(), witness: None };
    for &a in targets {
        let lhs = cocycle_entry(flow, base, s12, a);
        let first = cocycle_entry(flow, base, s1, a);
        let second = translated_entry(flow, tr, g1, &g1_inv, base, s2, a);
        let (Ok(lhs), Ok(first), Ok(second)) = (lhs, first, second) else {
            out.skipped.push(a);
            continue;
        };
        out.checked.push(a);
        if lhs != first.plus(&second) && out.witness.is_none() {
            out.witness = Some(a);
        }
    }
    Ok(out)
}

/// `g·w = π(g)w + c(g)`, evaluated on `targets`.
pub fn affine_apply(
    flow: &mut Flow<'_>,
    tr: &Translator<'_>,
    g: &GroupElement,
    w: &WVector,
    targets: &[u32],
) -> Result<WVector, GeomError> {
    let base = source_id(tr, &tr.model.identity())?;
    let source = source_id(tr, g)?;
    let g_inv = tr.model.inverse(g);
    let mut out = WVector::new();
    for &a in targets {
        let mut value = cocycle_entry(flow, base, source, a)?;
        if let Some(b) = tr.translate(&g_inv, a) {
            if let Some(wb) = w.get(&b) {
                let moved = wb
                    .push_forward(|v| tr.translate(g, v))
                    .ok_or_else(|| GeomError::uncertified("translated support leaves the ball", &[a]))?;
                value = value.plus(&moved);
            }
        }
        out.insert(a, value);
    }
    Ok(out)
}
