use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ball::{Ball, Names};
use super::leaks::leak_groups;
use super::Vertex;
use crate::group_models::{CosetKey, GroupElement, GroupModel, PeripheralStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    /// More than `limit` vertices would be needed.
    ResourceCap { limit: usize },
    /// A source is not a vertex of the graph.
    BadSource,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::ResourceCap { limit } => write!(f, "ball exceeds {limit} vertices"),
            BuildError::BadSource => write!(f, "source is not a vertex"),
        }
    }
}

impl core::error::Error for BuildError {}

struct Neighbourhood<'a> {
    model: &'a GroupModel,
    periph: &'a PeripheralStructure,
    letters: Vec<crate::group_models::Letter>,
    h_balls: Vec<Vec<GroupElement>>,
}

impl Neighbourhood<'_> {
    fn of(&self, v: &Vertex) -> Vec<Vertex> {
        match v {
            Vertex::Group(g) => {
                let mut out: Vec<Vertex> = Vec::with_capacity(self.letters.len() + self.periph.len());
                for &l in &self.letters {
                    let w = self.model.mul_letter(g, l);
                    if w != *g {
                        out.push(Vertex::Group(w));
                    }
                }
                for i in 0..self.periph.len() {
                    out.push(Vertex::Cone(self.periph.coset_key(self.model, i, g)));
                }
                out.sort();
                out.dedup();
                out
            }
            Vertex::Cone(key) => self.h_balls[key.index as usize]
                .iter()
                .map(|h| Vertex::Group(self.model.multiply(&key.rep, h)))
                .collect(),
            Vertex::Id(_) => Vec::new(),
        }
    }

    fn is_truncated_cone(&self, key: &CosetKey) -> bool {
        self.periph.local(key.index as usize).is_infinite()
    }
}

/// Ball of radius `radius` around the identity.
pub fn build_ball(
    model: &GroupModel,
    periph: &PeripheralStructure,
    radius: u32,
    coset_depth: u32,
    max_vertices: usize,
) -> Result<Ball, BuildError> {
    build_region(model, periph, &[Vertex::Group(model.identity())], radius, coset_depth, max_vertices)
}

/// Union of balls of radius `radius` around `sources`, where a cone
/// contributes only the members of its coset within `coset_depth` of the
/// representative. Edges are those of the induced subgraph.
pub fn build_region(
    model: &GroupModel,
    periph: &PeripheralStructure,
    sources: &[Vertex],
    radius: u32,
    coset_depth: u32,
    max_vertices: usize,
) -> Result<Ball, BuildError> {
    let nb = Neighbourhood {
        model,
        periph,
        letters: model.letters(),
        h_balls: (0..periph.len())
            .map(|i| {
                let depth = if periph.local(i).is_infinite() { coset_depth } else { u32::MAX };
                periph.ball(model, i, depth)
            })
            .collect(),
    };
    let mut list: Vec<Vertex> = Vec::new();
    let mut index: BTreeMap<Vertex, u32> = BTreeMap::new();
    let mut layer: Vec<u32> = Vec::new();
    for s in sources {
        let s = normalise(model, periph, s).ok_or(BuildError::BadSource)?;
        if !index.contains_key(&s) {
            index.insert(s.clone(), list.len() as u32);
            list.push(s);
            layer.push(0);
        }
    }
    let mut head = 0;
    while head < list.len() {
        let d = layer[head];
        if d < radius {
            for w in nb.of(&list[head]) {
                if index.contains_key(&w) {
                    continue;
                }
                if list.len() >= max_vertices {
                    return Err(BuildError::ResourceCap { limit: max_vertices });
                }
                index.insert(w.clone(), list.len() as u32);
                list.push(w);
                layer.push(d + 1);
            }
        }
        head += 1;
    }
    let n = list.len();
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut boundary = vec![false; n];
    let mut infinite = vec![false; n];
    for (u, v) in list.iter().enumerate() {
        match v {
            Vertex::Group(_) => {
                for w in nb.of(v) {
                    match index.get(&w) {
                        Some(&j) => {
                            lists[u].push(j);
                            lists[j as usize].push(u as u32);
                        }
                        None => boundary[u] = true,
                    }
                }
            }
            Vertex::Cone(key) => {
                infinite[u] = periph.local(key.index as usize).is_infinite();
                boundary[u] = nb.is_truncated_cone(key)
                    || nb.of(v).iter().any(|w| !index.contains_key(w));
            }
            Vertex::Id(_) => {}
        }
    }
    let leaks = leak_groups(model, periph, &list, &index, &boundary);
    let source_ids: Vec<u32> = sources
        .iter()
        .filter_map(|s| normalise(model, periph, s))
        .map(|s| index[&s])
        .collect();
    let mut ball =
        Ball::assemble(lists, Names::Vertices { list, index }, infinite, boundary, leaks);
    ball.sources = source_ids;
    ball.radius = Some(radius);
    ball.coset_depth = Some(coset_depth);
    Ok(ball)
}

fn normalise(model: &GroupModel, periph: &PeripheralStructure, v: &Vertex) -> Option<Vertex> {
    match v {
        Vertex::Group(g) => Some(Vertex::Group(model.canonicalize(g.word()))),
        Vertex::Cone(key) => {
            if key.index as usize >= periph.len() {
                return None;
            }
            let rep = model.canonicalize(key.rep.word());
            Some(Vertex::Cone(periph.coset_key(model, key.index as usize, &rep)))
        }
        Vertex::Id(_) => None,
    }
}
