use alloc::vec;
use alloc::vec::Vec;

use super::bfs::Csr;

const UNSET: u32 = u32::MAX;

/// Biconnected components, as one label per adjacency entry.
#[derive(Clone, Debug)]
pub(crate) struct Blocks {
    pub label: Vec<u32>,
}

impl Blocks {
    pub fn new(g: &Csr) -> Self {
        let n = g.len();
        let mut disc = vec![UNSET; n];
        let mut low = vec![0u32; n];
        let mut parent = vec![UNSET; n];
        let mut label = vec![UNSET; g.targets.len()];
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut frames: Vec<(u32, usize)> = Vec::new();
        let mut time = 0u32;
        let mut next_block = 0u32;
        for root in 0..n as u32 {
            if disc[root as usize] != UNSET {
                continue;
            }
            disc[root as usize] = time;
            low[root as usize] = time;
            time += 1;
            frames.push((root, g.range(root).start));
            while let Some(&mut (v, ref mut i)) = frames.last_mut() {
                let end = g.range(v).end;
                if *i < end {
                    let e = *i;
                    *i += 1;
                    let w = g.targets[e];
                    if w == parent[v as usize] {
                        continue;
                    }
                    if disc[w as usize] == UNSET {
                        edge_stack.push(e);
                        parent[w as usize] = v;
                        disc[w as usize] = time;
                        low[w as usize] = time;
                        time += 1;
                        frames.push((w, g.range(w).start));
                    } else if disc[w as usize] < disc[v as usize] {
                        edge_stack.push(e);
                        low[v as usize] = low[v as usize].min(disc[w as usize]);
                    }
                } else {
                    frames.pop();
                    let p = parent[v as usize];
                    if p == UNSET {
                        continue;
                    }
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] >= disc[p as usize] {
                        while let Some(e) = edge_stack.pop() {
                            label[e] = next_block;
                            let from = source_of(g, e);
                            if from == p && g.targets[e] == v {
                                break;
                            }
                        }
                        next_block += 1;
                    }
                }
            }
        }
        for u in 0..n as u32 {
            for e in g.range(u) {
                if label[e] == UNSET {
                    let w = g.targets[e];
                    let back = g.entry(w, u).expect("symmetric adjacency");
                    label[e] = label[back];
                }
            }
        }
        Blocks { label }
    }

    pub fn of_entry(&self, e: usize) -> u32 {
        self.label[e]
    }
}

fn source_of(g: &Csr, e: usize) -> u32 {
    match g.offsets.binary_search(&(e as u32)) {
        Ok(mut i) => {
            while g.offsets[i + 1] as usize == e {
                i += 1;
            }
            i as u32
        }
        Err(i) => (i - 1) as u32,
    }
}
