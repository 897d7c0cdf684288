use alloc::collections::{BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::vec::Vec;

use super::geometry::Geometry;
use super::OrientedEdge;

/// Which graph a cone is grown in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConeMode {
    /// In `B` with angles measured in `B`: every vertex found is in the
    /// true cone.
    Sure,
    /// In `B⁺` with angles measured in `B⁺`: every in-ball vertex of the
    /// true cone is found.
    Optimistic,
}

/// Vertices and edges reachable from an edge by paths of length at most `θ`
/// whose consecutive edges meet at angle at most `θ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cone {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    /// In-ball edges in the directions they are traversed.
    pub oriented: Vec<OrientedEdge>,
    /// Leak groups whose hub was reached.
    pub hubs: Vec<u32>,
}

impl Cone {
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, u: u32, v: u32) -> bool {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn contains_oriented(&self, e: OrientedEdge) -> bool {
        self.oriented.binary_search(&e).is_ok()
    }

    pub fn reaches_hub(&self, g: u32) -> bool {
        self.hubs.binary_search(&g).is_ok()
    }
}

impl Geometry<'_> {
    /// The cone on `e` with parameter `theta`, grown as `mode` prescribes.
    pub fn cone_in(&mut self, e: OrientedEdge, theta: u32, mode: ConeMode) -> Rc<Cone> {
        let plus = mode == ConeMode::Optimistic && self.ball.plus.is_some();
        let mode = if plus { ConeMode::Optimistic } else { ConeMode::Sure };
        let key = (e.o, e.t, theta, mode);
        if let Some(c) = self.cones.get(&key) {
            return c.clone();
        }
        let n = self.ball.len() as u32;
        let g = if plus { self.ball.plus_graph() } else { &self.ball.graph };
        let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut queue: VecDeque<(u32, u32, u32)> = VecDeque::new();
        if theta >= 1 && g.has_edge(e.o, e.t) {
            seen.insert((e.o, e.t));
            queue.push_back((e.o, e.t, 1));
        }
        while let Some((u, v, len)) = queue.pop_front() {
            if len >= theta {
                continue;
            }
            let nbrs = g.neighbours(v);
            let mut allowed: Vec<u32> = Vec::new();
            if v >= n {
                allowed.extend_from_slice(nbrs);
            } else {
                allowed.push(u);
                let row = self.angle_row(v, u, plus, theta);
                allowed.extend(row.reached.iter().filter(|&&(_, d)| d <= theta).map(|&(i, _)| nbrs[i as usize]));
            }
            for w in allowed {
                if seen.insert((v, w)) {
                    queue.push_back((v, w, len + 1));
                }
            }
        }
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut hubs = BTreeSet::new();
        let mut oriented = Vec::new();
        for &(u, v) in &seen {
            for x in [u, v] {
                if x < n {
                    vertices.insert(x);
                } else {
                    hubs.insert(x - n);
                }
            }
            if u < n && v < n {
                oriented.push(OrientedEdge::new(u, v));
                edges.insert(if u <= v { (u, v) } else { (v, u) });
            }
        }
        let cone = Rc::new(Cone {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
            oriented,
            hubs: hubs.into_iter().collect(),
        });
        self.cones.insert(key, cone.clone());
        cone
    }
}
