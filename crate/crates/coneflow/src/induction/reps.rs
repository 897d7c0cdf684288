use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::InductionError;
use crate::cocycle::Translator;
use crate::fine_graph::{GeomError, Vertex};
use crate::geodesic_flow::Flow;
use crate::group_models::{CosetKey, GroupElement, GroupModel, PeripheralStructure};

/// A finitely supported probability measure on group elements.
pub type ElementMeasure = BTreeMap<GroupElement, BigRational>;

/// One probability measure per coset of a peripheral subgroup, supported in
/// that coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomCosetReps {
    pub peripheral: usize,
    pub reps: BTreeMap<CosetKey, ElementMeasure>,
    /// Cosets that were asked for but could not be computed.
    pub excluded: Vec<(CosetKey, GeomError)>,
}

impl RandomCosetReps {
    pub fn get(&self, key: &CosetKey) -> Option<&ElementMeasure> {
        self.reps.get(key)
    }

    /// Largest support size.
    pub fn support_bound(&self) -> usize {
        self.reps.values().map(BTreeMap::len).max().unwrap_or(0)
    }

    /// Cosets whose measure has mass outside the coset.
    pub fn section_failures(&self, model: &GroupModel, periph: &PeripheralStructure) -> Vec<CosetKey> {
        self.reps
            .iter()
            .filter(|(key, m)| {
                m.keys().any(|x| periph.coset_key(model, key.index as usize, x) != **key)
            })
            .map(|(key, _)| key.clone())
            .collect()
    }
}

/// `γ·m`.
pub fn translate_measure(model: &GroupModel, gamma: &GroupElement, m: &ElementMeasure) -> ElementMeasure {
    m.iter().map(|(x, w)| (model.multiply(gamma, x), w.clone())).collect()
}

/// ℓ¹ distance of two measures on group elements.
pub fn l1_distance(p: &ElementMeasure, q: &ElementMeasure) -> BigRational {
    let keys: BTreeSet<&GroupElement> = p.keys().chain(q.keys()).collect();
    keys.into_iter().fold(BigRational::zero(), |acc, x| {
        let a = p.get(x).cloned().unwrap_or_else(BigRational::zero);
        let b = q.get(x).cloned().unwrap_or_else(BigRational::zero);
        acc + (a - b).abs()
    })
}

/// Keys of all cone vertices of peripheral `i` in the ball.
pub fn cone_keys(flow: &Flow<'_>, i: usize) -> Vec<CosetKey> {
    let ball = flow.ball();
    (0..ball.len() as u32)
        .filter_map(|v| match ball.vertex(v) {
            Vertex::Cone(k) if k.index as usize == i => Some(k),
            _ => None,
        })
        .collect()
}

/// Keys of the cosets `gH_i` with `|g| ≤ radius`.
pub fn coset_keys_within(model: &GroupModel, periph: &PeripheralStructure, i: usize, radius: u32) -> Vec<CosetKey> {
    let mut seen = BTreeSet::from([model.identity()]);
    let mut queue = VecDeque::from([(model.identity(), 0u32)]);
    let mut keys = BTreeSet::new();
    while let Some((g, d)) = queue.pop_front() {
        keys.insert(periph.coset_key(model, i, &g));
        if d == radius {
            continue;
        }
        for l in model.letters() {
            let h = model.mul_letter(&g, l);
            if seen.insert(h.clone()) {
                queue.push_back((h, d + 1));
            }
        }
    }
    keys.into_iter().collect()
}

/// `ν^{gH} = μ₁(ĝH)`, the mask of each listed cone vertex seen from the
/// identity, as a measure on group elements.
pub fn coset_reps_from_flow(
    flow: &mut Flow<'_>,
    tr: &Translator<'_>,
    i: usize,
    keys: &[CosetKey],
) -> Result<RandomCosetReps, InductionError> {
    let one = tr.identity().ok_or_else(|| GeomError::uncertified("identity outside the ball", &[]))?;
    let mut out = RandomCosetReps { peripheral: i, reps: BTreeMap::new(), excluded: Vec::new() };
    for key in keys {
        let Some(cone) = tr.ball.id_of(&Vertex::Cone(key.clone())) else {
            out.excluded.push((key.clone(), GeomError::uncertified("cone vertex outside the ball", &[])));
            continue;
        };
        let mask = match flow.mask(cone, one) {
            Ok(m) => m,
            Err(e) => {
                out.excluded.push((key.clone(), e));
                continue;
            }
        };
        let mut m = ElementMeasure::new();
        for (v, w) in mask.measure.iter() {
            match tr.element(v) {
                Some(x) => {
                    m.insert(x, w.clone());
                }
                None => return Err(GeomError::violation("mask of a cone vertex charges a cone vertex", &[cone, v]).into()),
            }
        }
        out.reps.insert(key.clone(), m);
    }
    Ok(out)
}

/// Dirac masses at the canonical representatives `k₁h₁…k_n` of a free
/// product with `H_i` a factor.
pub fn free_product_baseline(
    model: &GroupModel,
    periph: &PeripheralStructure,
    i: usize,
    keys: &[CosetKey],
) -> Result<RandomCosetReps, InductionError> {
    let factor = factor_of(model, periph, i)?;
    let mut out = RandomCosetReps { peripheral: i, reps: BTreeMap::new(), excluded: Vec::new() };
    for key in keys {
        let rep = periph.canonical_rep(key);
        if model.syllables(&rep).last().is_some_and(|s| s.0 == factor) {
            return Err(InductionError::Unsupported("coset key is not a normal-form prefix".into()));
        }
        out.reps.insert(key.clone(), BTreeMap::from([(rep, BigRational::one())]));
    }
    Ok(out)
}

fn factor_of(model: &GroupModel, periph: &PeripheralStructure, i: usize) -> Result<usize, InductionError> {
    let gens = periph.gen_set(i).cloned().unwrap_or_default();
    (0..model.num_factors())
        .find(|&f| model.factor_generators(f).is_some_and(|fg| fg.iter().copied().collect::<BTreeSet<_>>() == gens))
        .filter(|_| model.num_factors() > 1)
        .ok_or_else(|| InductionError::Unsupported("peripheral subgroup is not a free factor".into()))
}

/// The cosets of `H_i` where the Bass-Serre geodesic from the base edge to
/// its `γ`-translate moves inside the coset: `k₁h₁…k_j·H` for every
/// nontrivial `h_j` of the normal form `γ = k₁h₁…k_nh_n`.
pub fn bass_serre_cosets(
    model: &GroupModel,
    periph: &PeripheralStructure,
    i: usize,
    gamma: &GroupElement,
) -> Result<Vec<CosetKey>, InductionError> {
    let factor = factor_of(model, periph, i)?;
    let word = gamma.word();
    let mut out = Vec::new();
    for (f, start, _) in model.syllables(gamma) {
        if f == factor {
            let prefix = model.canonicalize(&word[..start]);
            out.push(periph.coset_key(model, i, &prefix));
        }
    }
    Ok(out)
}

/// Per-coset ℓ¹ deviation `‖ν^{gH} − γν^{γ⁻¹gH}‖₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlmostInvarianceReport {
    pub gamma: GroupElement,
    pub rows: Vec<(CosetKey, BigRational)>,
    pub nonzero: usize,
    /// `Σ deviation^p` over the evaluated cosets.
    pub p_sum: f64,
    /// Cosets whose `γ⁻¹`-translate has no measure.
    pub frontier: Vec<CosetKey>,
}

impl AlmostInvarianceReport {
    pub fn deviating(&self) -> Vec<CosetKey> {
        self.rows.iter().filter(|(_, d)| !d.is_zero()).map(|(k, _)| k.clone()).collect()
    }
}

pub fn almost_invariance_report(
    reps: &RandomCosetReps,
    model: &GroupModel,
    periph: &PeripheralStructure,
    gamma: &GroupElement,
    p: f64,
) -> AlmostInvarianceReport {
    let gamma_inv = model.inverse(gamma);
    let mut report =
        AlmostInvarianceReport { gamma: gamma.clone(), rows: Vec::new(), nonzero: 0, p_sum: 0.0, frontier: Vec::new() };
    for (key, m) in &reps.reps {
        let back = periph.coset_key(model, reps.peripheral, &model.multiply(&gamma_inv, &periph.canonical_rep(key)));
        let Some(other) = reps.get(&back) else {
            report.frontier.push(key.clone());
            continue;
        };
        let d = l1_distance(m, &translate_measure(model, gamma, other));
        if !d.is_zero() {
            report.nonzero += 1;
            report.p_sum += libm::pow(d.to_f64().unwrap_or(f64::INFINITY), p);
        }
        report.rows.push((key.clone(), d));
    }
    report
}

