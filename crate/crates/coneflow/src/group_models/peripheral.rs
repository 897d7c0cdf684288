use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::element::{GroupElement, Letter};
use super::model::{GroupModel, Kind};
use super::GroupError;

/// How a peripheral subgroup is designated in configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeripheralSpec {
    /// Subgroup generated by the listed generators.
    Generators(Vec<String>),
    /// Factor `i` of a free product.
    Factor(usize),
    /// A finite subgroup listed element by element.
    Elements(Vec<String>),
}

/// Canonical name of a left coset `gH_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetKey {
    pub index: u32,
    pub rep: GroupElement,
}

/// Isomorphism type of a peripheral subgroup or of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalGroup {
    Finite { order: usize },
    Free { rank: usize },
    Abelian { rank: usize },
}

impl LocalGroup {
    pub fn is_infinite(self) -> bool {
        match self {
            LocalGroup::Finite { .. } => false,
            LocalGroup::Free { rank } | LocalGroup::Abelian { rank } => rank > 0,
        }
    }

    /// Whether the Cayley graph on the standard generators is a tree.
    pub fn is_tree(self) -> bool {
        match self {
            LocalGroup::Finite { order } => order == 1,
            LocalGroup::Free { .. } => true,
            LocalGroup::Abelian { rank } => rank <= 1,
        }
    }
}

#[derive(Clone, Debug)]
enum Projection {
    Suffix(BTreeSet<u32>),
    Drop(BTreeSet<u32>),
    Enumerate(Vec<GroupElement>),
    InFactor { factor: usize, inner: Box<Projection> },
}

fn project(model: &GroupModel, word: &[Letter], proj: &Projection) -> Vec<Letter> {
    match proj {
        Projection::Suffix(s) => {
            let mut end = word.len();
            while end > 0 && s.contains(&word[end - 1].gen) {
                end -= 1;
            }
            word[..end].to_vec()
        }
        Projection::Drop(s) => word.iter().copied().filter(|l| !s.contains(&l.gen)).collect(),
        Projection::Enumerate(hs) => {
            let mut best: Option<GroupElement> = None;
            for h in hs {
                let mut w = word.to_vec();
                w.extend_from_slice(h.word());
                let c = model.canonicalize(&w);
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
            best.map(|b| b.word().to_vec()).unwrap_or_default()
        }
        Projection::InFactor { factor, inner } => {
            let Kind::Product { factors, offsets, owner } = &model.kind else {
                return word.to_vec();
            };
            let mut start = word.len();
            while start > 0 && owner[word[start - 1].gen as usize] as usize == *factor {
                start -= 1;
            }
            if start == word.len() {
                return word.to_vec();
            }
            let off = offsets[*factor];
            let local: Vec<Letter> =
                word[start..].iter().map(|l| Letter::new(l.gen - off, l.inv)).collect();
            let rep = project(&factors[*factor], &local, inner);
            let mut out = word[..start].to_vec();
            out.extend(rep.iter().map(|l| Letter::new(l.gen + off, l.inv)));
            out
        }
    }
}

fn closure(model: &GroupModel, gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = BTreeSet::from([GroupElement::identity()]);
    let mut queue = VecDeque::from([GroupElement::identity()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = model.multiply(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn build_projection(
    model: &GroupModel,
    gens: &BTreeSet<u32>,
) -> Result<(Projection, LocalGroup), GroupError> {
    match &model.kind {
        Kind::Free => Ok((Projection::Suffix(gens.clone()), LocalGroup::Free { rank: gens.len() })),
        Kind::Abelian => {
            Ok((Projection::Drop(gens.clone()), LocalGroup::Abelian { rank: gens.len() }))
        }
        Kind::Finite(_) => {
            let hgens: Vec<GroupElement> = gens.iter().map(|&g| model.generator(g)).collect();
            let elements = closure(model, &hgens);
            let order = elements.len();
            Ok((Projection::Enumerate(elements), LocalGroup::Finite { order }))
        }
        Kind::Product { factors, offsets, owner } => {
            let f = owner[*gens.iter().next().ok_or_else(|| {
                GroupError::Unsupported("peripheral with no generators".into())
            })? as usize] as usize;
            if gens.iter().any(|&g| owner[g as usize] as usize != f) {
                return Err(GroupError::Unsupported(
                    "peripheral generators must lie in a single free factor".into(),
                ));
            }
            let local: BTreeSet<u32> = gens.iter().map(|g| g - offsets[f]).collect();
            let (inner, lg) = build_projection(&factors[f], &local)?;
            Ok((Projection::InFactor { factor: f, inner: Box::new(inner) }, lg))
        }
    }
}

/// One peripheral subgroup `H_i` with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct Peripheral {
    projection: Projection,
    gen_set: Option<BTreeSet<u32>>,
    gens: Vec<GroupElement>,
    local: LocalGroup,
    finite_dist: Option<BTreeMap<GroupElement, u32>>,
}

impl Peripheral {
    fn new(model: &GroupModel, spec: &PeripheralSpec) -> Result<Self, GroupError> {
        let gen_set: BTreeSet<u32> = match spec {
            PeripheralSpec::Generators(labels) => labels
                .iter()
                .map(|l| {
                    model
                        .labels()
                        .iter()
                        .position(|m| m == l)
                        .map(|p| p as u32)
                        .ok_or_else(|| GroupError::Parse(format!("unknown generator {l}")))
                })
                .collect::<Result<_, _>>()?,
            PeripheralSpec::Factor(i) => model
                .factor_generators(*i)
                .ok_or_else(|| GroupError::Unsupported(format!("no free factor {i}")))?
                .into_iter()
                .collect(),
            PeripheralSpec::Elements(words) => {
                let mut elements: Vec<GroupElement> =
                    words.iter().map(|w| model.parse(w)).collect::<Result<_, _>>()?;
                elements.push(GroupElement::identity());
                elements.sort();
                elements.dedup();
                let set: BTreeSet<&GroupElement> = elements.iter().collect();
                for x in &elements {
                    for y in &elements {
                        if !set.contains(&model.multiply(x, y)) {
                            return Err(GroupError::Unsupported(
                                "listed elements are not closed under multiplication".into(),
                            ));
                        }
                    }
                }
                let gens: Vec<GroupElement> =
                    elements.iter().filter(|e| !e.is_identity()).cloned().collect();
                let finite_dist =
                    elements.iter().map(|e| (e.clone(), u32::from(!e.is_identity()))).collect();
                return Ok(Peripheral {
                    local: LocalGroup::Finite { order: elements.len() },
                    projection: Projection::Enumerate(elements),
                    gen_set: None,
                    gens,
                    finite_dist: Some(finite_dist),
                });
            }
        };
        if gen_set.is_empty() {
            return Err(GroupError::Unsupported("peripheral with no generators".into()));
        }
        let (projection, local) = build_projection(model, &gen_set)?;
        let mut gens = Vec::new();
        for &g in &gen_set {
            for inv in [false, true] {
                let e = model.canonicalize(&[Letter::new(g, inv)]);
                if !e.is_identity() && !gens.contains(&e) {
                    gens.push(e);
                }
            }
        }
        let finite_dist = match local {
            LocalGroup::Finite { .. } => Some(bfs_dist(model, &gens, u32::MAX)),
            _ => None,
        };
        Ok(Peripheral { projection, gen_set: Some(gen_set), gens, local, finite_dist })
    }

    pub fn local(&self) -> LocalGroup {
        self.local
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }
}

fn bfs_dist(model: &GroupModel, gens: &[GroupElement], depth: u32) -> BTreeMap<GroupElement, u32> {
    let mut dist = BTreeMap::from([(GroupElement::identity(), 0u32)]);
    let mut queue = VecDeque::from([GroupElement::identity()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d >= depth {
            continue;
        }
        for g in gens {
            let y = model.multiply(&x, g);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// The peripheral subgroups `H_1, …, H_k` of a model.
#[derive(Clone, Debug)]
pub struct PeripheralStructure {
    entries: Vec<Peripheral>,
}

impl PeripheralStructure {
    pub fn new(model: &GroupModel, specs: &[PeripheralSpec]) -> Result<Self, GroupError> {
        let entries = specs.iter().map(|s| Peripheral::new(model, s)).collect::<Result<_, _>>()?;
        Ok(PeripheralStructure { entries })
    }

    pub fn empty() -> Self {
        PeripheralStructure { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Peripheral {
        &self.entries[i]
    }

    pub fn local(&self, i: usize) -> LocalGroup {
        self.entries[i].local
    }

    pub fn coset_key(&self, model: &GroupModel, i: usize, g: &GroupElement) -> CosetKey {
        let rep = project(model, g.word(), &self.entries[i].projection);
        CosetKey { index: i as u32, rep: GroupElement::from_canonical(rep) }
    }

    /// The representative named by a key; it always lies in the coset.
    pub fn canonical_rep(&self, key: &CosetKey) -> GroupElement {
        key.rep.clone()
    }

    pub fn contains(&self, model: &GroupModel, i: usize, g: &GroupElement) -> bool {
        self.coset_key(model, i, g).rep.is_identity()
    }

    /// Word length of `h ∈ H_i` for the generators of `H_i`.
    pub fn d_h(&self, i: usize, h: &GroupElement) -> Option<u32> {
        match &self.entries[i].finite_dist {
            Some(table) => table.get(h).copied(),
            None => Some(h.len() as u32),
        }
    }

    /// All `h ∈ H_i` with `d_h(h) ≤ depth`, sorted by length then shortlex.
    pub fn ball(&self, model: &GroupModel, i: usize, depth: u32) -> Vec<GroupElement> {
        let p = &self.entries[i];
        let mut out: Vec<(u32, GroupElement)> = match &p.finite_dist {
            Some(table) => {
                table.iter().filter(|(_, d)| **d <= depth).map(|(h, d)| (*d, h.clone())).collect()
            }
            None => bfs_dist(model, &p.gens, depth).into_iter().map(|(h, d)| (d, h)).collect(),
        };
        out.sort();
        out.into_iter().map(|(_, h)| h).collect()
    }

    pub(crate) fn gen_set(&self, i: usize) -> Option<&BTreeSet<u32>> {
        self.entries[i].gen_set.as_ref()
    }
}

/// A free factor of the model spanned by a set of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub gens: Vec<u32>,
    pub local: LocalGroup,
    pub peripheral: Option<usize>,
}

/// Splitting of a model as a free product of blocks, with every peripheral
/// equal to one block. Canonical words are concatenations of block syllables.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    pub blocks: Vec<Block>,
    block_of_gen: Vec<u32>,
}

impl BlockStructure {
    /// `None` when the model does not split compatibly with the peripherals.
    pub fn new(model: &GroupModel, peripherals: &PeripheralStructure) -> Option<Self> {
        let mut peris: Vec<(usize, BTreeSet<u32>)> = Vec::new();
        for i in 0..peripherals.len() {
            let s = peripherals.gen_set(i)?.clone();
            if peris.iter().any(|(_, t)| !t.is_disjoint(&s)) {
                return None;
            }
            peris.push((i, s));
        }
        let mut blocks = Vec::new();
        decompose(model, 0, &peris, peripherals, &mut blocks)?;
        let mut block_of_gen = alloc::vec![u32::MAX; model.num_generators()];
        for (b, block) in blocks.iter().enumerate() {
            for &g in &block.gens {
                block_of_gen[g as usize] = b as u32;
            }
        }
        for (i, s) in &peris {
            let b = block_of_gen[*s.iter().next()? as usize] as usize;
            if blocks[b].peripheral != Some(*i) {
                return None;
            }
        }
        Some(BlockStructure { blocks, block_of_gen })
    }

    pub fn block_of_gen(&self, gen: u32) -> usize {
        self.block_of_gen[gen as usize] as usize
    }

    /// Splits `g = rep · k` where `k` is the trailing syllable of block `b`.
    pub fn split(&self, g: &GroupElement, b: usize) -> (GroupElement, GroupElement) {
        let w = g.word();
        let mut start = w.len();
        while start > 0 && self.block_of_gen(w[start - 1].gen) == b {
            start -= 1;
        }
        (
            GroupElement::from_canonical(w[..start].to_vec()),
            GroupElement::from_canonical(w[start..].to_vec()),
        )
    }
}

fn decompose(
    model: &GroupModel,
    offset: u32,
    peris: &[(usize, BTreeSet<u32>)],
    peripherals: &PeripheralStructure,
    out: &mut Vec<Block>,
) -> Option<()> {
    let n = model.num_generators() as u32;
    let range: BTreeSet<u32> = (offset..offset + n).collect();
    let inside: Vec<&(usize, BTreeSet<u32>)> =
        peris.iter().filter(|(_, s)| s.iter().any(|g| range.contains(g))).collect();
    if inside.iter().any(|(_, s)| !s.is_subset(&range)) {
        return None;
    }
    match &model.kind {
        Kind::Free => {
            let mut used = BTreeSet::new();
            for (i, s) in &inside {
                used.extend(s.iter().copied());
                out.push(Block {
                    gens: s.iter().copied().collect(),
                    local: LocalGroup::Free { rank: s.len() },
                    peripheral: Some(*i),
                });
            }
            for g in range.difference(&used) {
                out.push(Block { gens: alloc::vec![*g], local: LocalGroup::Free { rank: 1 }, peripheral: None });
            }
        }
        Kind::Abelian | Kind::Finite(_) => {
            if n == 0 {
                return Some(());
            }
            let local = match &model.kind {
                Kind::Finite(f) => LocalGroup::Finite { order: f.order() },
                _ => LocalGroup::Abelian { rank: n as usize },
            };
            let peripheral = match inside.as_slice() {
                [] => None,
                [(i, s)] if *s == range && peripherals.local(*i) == local => Some(*i),
                _ => return None,
            };
            out.push(Block { gens: range.into_iter().collect(), local, peripheral });
        }
        Kind::Product { factors, offsets, .. } => {
            for (f, off) in factors.iter().zip(offsets) {
                decompose(f, offset + off, peris, peripherals, out)?;
            }
        }
    }
    Some(())
}
