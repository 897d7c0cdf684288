use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::element::{GroupElement, Letter};
use super::finite::{FiniteGroup, FiniteSpec};
use super::GroupError;

/// Description of a group model, as read from configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Finite(FiniteSpec),
    Free { labels: Vec<String> },
    FreeAbelian { labels: Vec<String> },
    FreeProduct(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn free(labels: &[&str]) -> Self {
        GroupSpec::Free { labels: labels.iter().map(|s| s.to_string()).collect() }
    }

    pub fn free_abelian(labels: &[&str]) -> Self {
        GroupSpec::FreeAbelian { labels: labels.iter().map(|s| s.to_string()).collect() }
    }

    pub fn cyclic(n: usize, label: &str) -> Self {
        GroupSpec::Finite(FiniteSpec::cyclic(n, label))
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    Finite(FiniteGroup),
    Free,
    Abelian,
    Product { factors: Vec<GroupModel>, offsets: Vec<u32>, owner: Vec<u32> },
}

/// An immutable group with canonical forms for its elements.
#[derive(Clone, Debug)]
pub struct GroupModel {
    labels: Vec<String>,
    pub(crate) kind: Kind,
}

pub fn make_model(spec: &GroupSpec) -> Result<GroupModel, GroupError> {
    GroupModel::new(spec)
}

impl GroupModel {
    pub fn new(spec: &GroupSpec) -> Result<Self, GroupError> {
        let model = match spec {
            GroupSpec::Finite(f) => GroupModel {
                labels: f.generators.iter().map(|(l, _)| l.clone()).collect(),
                kind: Kind::Finite(FiniteGroup::new(f)?),
            },
            GroupSpec::Free { labels } => GroupModel { labels: labels.clone(), kind: Kind::Free },
            GroupSpec::FreeAbelian { labels } => {
                GroupModel { labels: labels.clone(), kind: Kind::Abelian }
            }
            GroupSpec::FreeProduct(parts) => {
                if parts.is_empty() {
                    return Err(GroupError::Unsupported("free product with no factors".into()));
                }
                let factors = parts.iter().map(GroupModel::new).collect::<Result<Vec<_>, _>>()?;
                let mut labels = Vec::new();
                let mut offsets = Vec::new();
                let mut owner = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    offsets.push(labels.len() as u32);
                    labels.extend(f.labels.iter().cloned());
                    owner.extend(core::iter::repeat_n(i as u32, f.labels.len()));
                }
                GroupModel { labels, kind: Kind::Product { factors, offsets, owner } }
            }
        };
        let mut seen = BTreeSet::new();
        for l in &model.labels {
            if l.is_empty() || !seen.insert(l.as_str()) {
                return Err(GroupError::Unsupported("generator labels must be distinct and nonempty".into()));
            }
        }
        Ok(model)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            Kind::Finite(_) => true,
            Kind::Free | Kind::Abelian => self.labels.is_empty(),
            Kind::Product { factors, .. } => {
                let nontrivial = factors.iter().filter(|f| f.order() != Some(1)).count();
                nontrivial <= 1 && factors.iter().all(GroupModel::is_finite)
            }
        }
    }

    /// Number of elements for finite models.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite(f) => Some(f.order()),
            Kind::Free | Kind::Abelian => self.labels.is_empty().then_some(1),
            Kind::Product { factors, .. } => {
                let mut nontrivial = factors.iter().filter(|f| f.order() != Some(1));
                match (nontrivial.next(), nontrivial.next()) {
                    (None, _) => Some(1),
                    (Some(f), None) => f.order(),
                    _ => None,
                }
            }
        }
    }

    /// All letters, generators before inverses of the next generator.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.labels.len() as u32)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    pub fn generator(&self, gen: u32) -> GroupElement {
        self.canonicalize(&[Letter::new(gen, false)])
    }

    pub fn canonicalize(&self, word: &[Letter]) -> GroupElement {
        GroupElement::from_canonical(self.canonical_word(word))
    }

    pub(crate) fn canonical_word(&self, word: &[Letter]) -> Vec<Letter> {
        match &self.kind {
            Kind::Finite(f) => f.canonicalize(word),
            Kind::Free => {
                let mut out: Vec<Letter> = Vec::with_capacity(word.len());
                for &l in word {
                    if out.last() == Some(&l.inverse()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                out
            }
            Kind::Abelian => {
                let mut exps = vec![0i64; self.labels.len()];
                for l in word {
                    exps[l.gen as usize] += if l.inv { -1 } else { 1 };
                }
                let mut out = Vec::new();
                for (g, &e) in exps.iter().enumerate() {
                    let l = Letter::new(g as u32, e < 0);
                    out.extend(core::iter::repeat_n(l, e.unsigned_abs() as usize));
                }
                out
            }
            Kind::Product { factors, offsets, owner } => {
                let mut syllables: Vec<(u32, Vec<Letter>)> = Vec::new();
                let mut i = 0;
                while i < word.len() {
                    let f = owner[word[i].gen as usize];
                    let mut j = i;
                    while j < word.len() && owner[word[j].gen as usize] == f {
                        j += 1;
                    }
                    let off = offsets[f as usize];
                    let mut local: Vec<Letter> = match syllables.last() {
                        Some((top, _)) if *top == f => syllables.pop().map(|s| s.1).unwrap_or_default(),
                        _ => Vec::new(),
                    };
                    local.extend(word[i..j].iter().map(|l| Letter::new(l.gen - off, l.inv)));
                    let canon = factors[f as usize].canonical_word(&local);
                    if !canon.is_empty() {
                        syllables.push((f, canon));
                    }
                    i = j;
                }
                let mut out = Vec::with_capacity(word.len());
                for (f, syl) in syllables {
                    let off = offsets[f as usize];
                    out.extend(syl.iter().map(|l| Letter::new(l.gen + off, l.inv)));
                }
                out
            }
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        if g.is_identity() {
            return h.clone();
        }
        if h.is_identity() {
            return g.clone();
        }
        let mut w = Vec::with_capacity(g.len() + h.len());
        w.extend_from_slice(g.word());
        w.extend_from_slice(h.word());
        self.canonicalize(&w)
    }

    pub fn mul_letter(&self, g: &GroupElement, l: Letter) -> GroupElement {
        if let Kind::Free = self.kind {
            let mut w = g.word().to_vec();
            if w.last() == Some(&l.inverse()) {
                w.pop();
            } else {
                w.push(l);
            }
            return GroupElement::from_canonical(w);
        }
        let mut w = g.word().to_vec();
        w.push(l);
        self.canonicalize(&w)
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let w: Vec<Letter> = g.word().iter().rev().map(|l| l.inverse()).collect();
        self.canonicalize(&w)
    }

    pub fn word_length(&self, g: &GroupElement) -> usize {
        g.len()
    }

    /// Global generator indices owned by factor `i` of a free product.
    pub fn factor_generators(&self, i: usize) -> Option<Vec<u32>> {
        match &self.kind {
            Kind::Product { factors, offsets, .. } => {
                let f = factors.get(i)?;
                Some((0..f.num_generators() as u32).map(|g| g + offsets[i]).collect())
            }
            _ => None,
        }
    }

    pub fn num_factors(&self) -> usize {
        match &self.kind {
            Kind::Product { factors, .. } => factors.len(),
            _ => 1,
        }
    }

    pub fn factor(&self, i: usize) -> Option<&GroupModel> {
        match &self.kind {
            Kind::Product { factors, .. } => factors.get(i),
            _ => None,
        }
    }

    /// Syllable decomposition of a canonical word of a free product:
    /// `(factor, start, end)` ranges. Other models give one syllable.
    pub fn syllables(&self, g: &GroupElement) -> Vec<(usize, usize, usize)> {
        let w = g.word();
        match &self.kind {
            Kind::Product { owner, .. } => {
                let mut out = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let f = owner[w[i].gen as usize];
                    let mut j = i;
                    while j < w.len() && owner[w[j].gen as usize] == f {
                        j += 1;
                    }
                    out.push((f as usize, i, j));
                    i = j;
                }
                out
            }
            _ if w.is_empty() => Vec::new(),
            _ => vec![(0, 0, w.len())],
        }
    }

    pub fn parse(&self, text: &str) -> Result<GroupElement, GroupError> {
        super::parse::parse_word(self, text).map(|w| self.canonicalize(&w))
    }

    pub fn format(&self, g: &GroupElement) -> String {
        super::parse::format_word(self, g.word())
    }
}
