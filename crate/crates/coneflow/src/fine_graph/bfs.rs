use alloc::vec;
use alloc::vec::Vec;

use super::INF;

/// Compressed adjacency lists with sorted neighbours.
#[derive(Clone, Debug, Default)]
pub(crate) struct Csr {
    pub offsets: Vec<u32>,
    pub targets: Vec<u32>,
}

impl Csr {
    pub fn from_lists(lists: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        offsets.push(0);
        for l in lists {
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            targets.extend_from_slice(&l);
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn range(&self, v: u32) -> core::ops::Range<usize> {
        self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.targets[self.range(v)]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.range(v).len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbours(u).binary_search(&v).is_ok()
    }

    /// Index of the entry `u → v`.
    pub fn entry(&self, u: u32, v: u32) -> Option<usize> {
        let r = self.range(u);
        self.targets[r.clone()].binary_search(&v).ok().map(|i| r.start + i)
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }
}

/// Full breadth-first distances from a set of sources.
pub(crate) fn bfs_all(g: &Csr, sources: &[u32]) -> Vec<u32> {
    let mut dist = vec![INF; g.len()];
    let mut queue = Vec::with_capacity(g.len().min(1 << 16));
    for &s in sources {
        if dist[s as usize] == INF {
            dist[s as usize] = 0;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let d = dist[v as usize] + 1;
        for &w in g.neighbours(v) {
            if dist[w as usize] == INF {
                dist[w as usize] = d;
                queue.push(w);
            }
        }
    }
    dist
}

/// Reusable state for many small searches on one graph.
#[derive(Clone, Debug)]
pub(crate) struct Scratch {
    stamp: Vec<u32>,
    want: Vec<u32>,
    dist: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch { stamp: vec![0; n], want: vec![0; n], dist: vec![0; n], epoch: 0, queue: Vec::new() }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.want.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    fn get(&self, v: u32) -> u32 {
        if self.stamp[v as usize] == self.epoch {
            self.dist[v as usize]
        } else {
            INF
        }
    }

    fn set(&mut self, v: u32, d: u32) {
        self.stamp[v as usize] = self.epoch;
        self.dist[v as usize] = d;
    }

    /// Distances from `src` to the neighbours of `skip` in `g` with `skip`
    /// removed, searching no deeper than `cap`. Only reached neighbours are
    /// listed. When `block` is given only entries labelled with that block
    /// are used. The flag is true when the search exhausted its component,
    /// so that a missing neighbour is unreachable rather than deeper than
    /// `cap`.
    pub fn punctured(
        &mut self,
        g: &Csr,
        src: u32,
        skip: u32,
        cap: u32,
        block: Option<(&[u32], u32)>,
    ) -> (Vec<(u32, u32)>, bool) {
        self.reset();
        self.set(src, 0);
        self.queue.push(src);
        let mut found = Vec::new();
        if g.has_edge(skip, src) {
            found.push((src, 0));
        }
        let mut remaining = g.degree(skip) - found.len();
        let mut head = 0;
        let mut complete = true;
        while head < self.queue.len() && remaining > 0 {
            let v = self.queue[head];
            head += 1;
            let d = self.get(v);
            if d >= cap {
                complete = false;
                break;
            }
            if g.degree(v) > 4 * g.degree(skip) && self.finishes_at(g, v, skip, block) {
                for &t in g.neighbours(skip) {
                    if self.stamp[t as usize] != self.epoch {
                        self.set(t, d + 1);
                        found.push((t, d + 1));
                    }
                }
                break;
            }
            let r = g.range(v);
            for i in r {
                if let Some((labels, b)) = block {
                    if labels[i] != b {
                        continue;
                    }
                }
                let w = g.targets[i];
                if w == skip || self.stamp[w as usize] == self.epoch {
                    continue;
                }
                self.set(w, d + 1);
                self.queue.push(w);
                if g.has_edge(w, skip) {
                    found.push((w, d + 1));
                    remaining -= 1;
                }
            }
        }
        (found, complete)
    }

    /// Whether every unreached neighbour of `skip` is joined to `v` by a
    /// usable entry, so that expanding `v` ends the search.
    fn finishes_at(&self, g: &Csr, v: u32, skip: u32, block: Option<(&[u32], u32)>) -> bool {
        g.neighbours(skip).iter().all(|&t| {
            self.stamp[t as usize] == self.epoch
                || g.entry(v, t).is_some_and(|i| block.is_none_or(|(labels, b)| labels[i] == b))
        })
    }
}
