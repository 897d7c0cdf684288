use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::element::Letter;
use super::GroupError;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpec {
    /// Element names, used only in diagnostics.
    pub elements: Vec<String>,
    /// `table[i][j]` is the index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
    /// Generator labels and the element each one denotes.
    pub generators: Vec<(String, usize)>,
}

impl FiniteSpec {
    /// Cyclic group of order `n` with a single generator.
    pub fn cyclic(n: usize, label: &str) -> Self {
        let elements = (0..n).map(|i| format!("{label}^{i}")).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteSpec { elements, table, generators: vec![(label.to_string(), 1 % n)] }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FiniteGroup {
    pub(crate) table: Vec<Vec<u32>>,
    pub(crate) inverse: Vec<u32>,
    pub(crate) identity: u32,
    pub(crate) gen_elem: Vec<u32>,
    /// Shortlex-minimal word of every element.
    pub(crate) words: Vec<Vec<Letter>>,
}

impl FiniteGroup {
    pub(crate) fn new(spec: &FiniteSpec) -> Result<Self, GroupError> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(GroupError::MalformedTable("empty table".into()));
        }
        if spec.table.len() != n || spec.table.iter().any(|r| r.len() != n) {
            return Err(GroupError::MalformedTable(format!("table is not {n}x{n}")));
        }
        if spec.table.iter().flatten().any(|&v| v >= n) {
            return Err(GroupError::MalformedTable("entry out of range".into()));
        }
        let t = &spec.table;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| t[e][x] == x && t[x][e] == x))
            .ok_or_else(|| GroupError::MalformedTable("no identity".into()))?;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| t[x][y] == identity && t[y][x] == identity)
                .ok_or_else(|| {
                    GroupError::MalformedTable(format!("missing inverse of {}", spec.elements[x]))
                })?;
            inverse[x] = inv as u32;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if t[t[x][y]][z] != t[x][t[y][z]] {
                        return Err(GroupError::MalformedTable(format!(
                            "not associative at ({}, {}, {})",
                            spec.elements[x], spec.elements[y], spec.elements[z]
                        )));
                    }
                }
            }
        }
        let mut gen_elem = Vec::with_capacity(spec.generators.len());
        for (label, e) in &spec.generators {
            if *e >= n {
                return Err(GroupError::MalformedTable(format!("generator {label} out of range")));
            }
            if *e == identity {
                return Err(GroupError::MalformedTable(format!("generator {label} is the identity")));
            }
            gen_elem.push(*e as u32);
        }
        let table: Vec<Vec<u32>> =
            t.iter().map(|r| r.iter().map(|&v| v as u32).collect()).collect();
        let mut g = FiniteGroup { table, inverse, identity: identity as u32, gen_elem, words: Vec::new() };
        g.words = g.shortlex_words()?;
        Ok(g)
    }

    fn letter_elem(&self, l: Letter) -> u32 {
        let e = self.gen_elem[l.gen as usize];
        if l.inv {
            self.inverse[e as usize]
        } else {
            e
        }
    }

    fn shortlex_words(&self) -> Result<Vec<Vec<Letter>>, GroupError> {
        let n = self.table.len();
        let mut words: Vec<Option<Vec<Letter>>> = vec![None; n];
        words[self.identity as usize] = Some(Vec::new());
        let mut queue = VecDeque::from([self.identity]);
        let letters: Vec<Letter> = (0..self.gen_elem.len() as u32)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        while let Some(x) = queue.pop_front() {
            for &l in &letters {
                let y = self.table[x as usize][self.letter_elem(l) as usize];
                if words[y as usize].is_none() {
                    let mut w = words[x as usize].clone().unwrap_or_default();
                    w.push(l);
                    words[y as usize] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
            .into_iter()
            .map(|w| w.ok_or_else(|| GroupError::MalformedTable("generators do not generate".into())))
            .collect()
    }

    pub(crate) fn evaluate(&self, word: &[Letter]) -> u32 {
        word.iter()
            .fold(self.identity, |acc, &l| self.table[acc as usize][self.letter_elem(l) as usize])
    }

    pub(crate) fn canonicalize(&self, word: &[Letter]) -> Vec<Letter> {
        self.words[self.evaluate(word) as usize].clone()
    }

    pub(crate) fn order(&self) -> usize {
        self.table.len()
    }
}
