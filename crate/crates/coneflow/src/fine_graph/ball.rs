use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::bfs::Csr;
use super::{OrientedEdge, Vertex};

#[derive(Clone, Debug)]
pub(crate) enum Names {
    Vertices { list: Vec<Vertex>, index: BTreeMap<Vertex, u32> },
    Ids { list: Vec<u64>, index: BTreeMap<u64, u32> },
    /// Vertex `i` is `Id(i)`.
    Sequential,
}

/// A finite induced subgraph `B` of a fine graph, with leak groups.
#[derive(Clone, Debug)]
pub struct Ball {
    pub(crate) graph: Csr,
    /// `B` plus one hub per leak group; hub of group `g` is node `n + g`.
    pub(crate) plus: Option<Csr>,
    pub(crate) names: Names,
    pub(crate) infinite_valence: Vec<bool>,
    pub(crate) boundary: Vec<bool>,
    pub(crate) leaks: Vec<Vec<u32>>,
    pub(crate) sources: Vec<u32>,
    pub(crate) radius: Option<u32>,
    pub(crate) coset_depth: Option<u32>,
}

impl Ball {
    pub(crate) fn assemble(
        lists: Vec<Vec<u32>>,
        names: Names,
        infinite_valence: Vec<bool>,
        boundary: Vec<bool>,
        leaks: Vec<Vec<u32>>,
    ) -> Self {
        let n = lists.len();
        let plus = if leaks.is_empty() {
            None
        } else {
            let mut plus_lists = lists.clone();
            for (g, members) in leaks.iter().enumerate() {
                let hub = (n + g) as u32;
                for &m in members {
                    plus_lists[m as usize].push(hub);
                }
                plus_lists.push(members.clone());
            }
            Some(Csr::from_lists(&plus_lists))
        };
        let graph = Csr::from_lists(&lists);
        Ball {
            graph,
            plus,
            names,
            infinite_valence,
            boundary,
            leaks,
            sources: Vec::new(),
            radius: None,
            coset_depth: None,
        }
    }

    pub(crate) fn from_csr(graph: Csr, infinite_valence: Vec<bool>) -> Self {
        let n = graph.len();
        Ball {
            graph,
            plus: None,
            names: Names::Sequential,
            infinite_valence,
            boundary: alloc::vec![false; n],
            leaks: Vec::new(),
            sources: Vec::new(),
            radius: None,
            coset_depth: None,
        }
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.len() == 0
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        self.graph.neighbours(v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.graph.degree(v)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn edges(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        (0..self.len() as u32)
            .flat_map(move |u| self.neighbours(u).iter().map(move |&v| OrientedEdge::new(u, v)))
    }

    pub fn vertex(&self, id: u32) -> Vertex {
        match &self.names {
            Names::Vertices { list, .. } => list[id as usize].clone(),
            Names::Ids { list, .. } => Vertex::Id(list[id as usize]),
            Names::Sequential => Vertex::Id(u64::from(id)),
        }
    }

    pub fn id_of(&self, v: &Vertex) -> Option<u32> {
        match (&self.names, v) {
            (Names::Vertices { index, .. }, _) => index.get(v).copied(),
            (Names::Ids { index, .. }, Vertex::Id(i)) => index.get(i).copied(),
            (Names::Sequential, Vertex::Id(i)) => {
                (*i < self.len() as u64).then_some(*i as u32)
            }
            _ => None,
        }
    }

    pub fn is_cone(&self, id: u32) -> bool {
        matches!(self.vertex(id), Vertex::Cone(_))
    }

    pub fn infinite_valence(&self, id: u32) -> bool {
        self.infinite_valence[id as usize]
    }

    /// Whether some neighbour in the full graph lies outside the ball.
    pub fn is_boundary(&self, id: u32) -> bool {
        self.boundary[id as usize]
    }

    /// In-ball vertices adjacent to each component of the omitted part.
    pub fn leak_groups(&self) -> &[Vec<u32>] {
        &self.leaks
    }

    /// Whether the ball is the whole graph.
    pub fn is_complete(&self) -> bool {
        self.leaks.is_empty()
    }

    pub fn sources(&self) -> &[u32] {
        &self.sources
    }

    pub fn radius(&self) -> Option<u32> {
        self.radius
    }

    pub fn coset_depth(&self) -> Option<u32> {
        self.coset_depth
    }

    pub(crate) fn plus_graph(&self) -> &Csr {
        self.plus.as_ref().unwrap_or(&self.graph)
    }
}
