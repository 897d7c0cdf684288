//! Leak groups: for each component of the omitted part of the graph, the set
//! of in-ball vertices adjacent to it.
//!
//! With a block structure every omitted component touches the ball inside a
//! single piece `rep · K` of one block `K`, so components can be found by
//! looking at one piece at a time. Finite blocks are enumerated, tree-like
//! blocks use the prefix hull of the in-ball members, and the remaining
//! blocks are treated as one component per piece.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::Vertex;
use crate::group_models::{BlockStructure, GroupElement, GroupModel, Letter, LocalGroup, PeripheralStructure};

#[derive(Default)]
struct Piece {
    members: Vec<(u32, GroupElement)>,
    cone: Option<u32>,
}

pub(crate) fn leak_groups(
    model: &GroupModel,
    periph: &PeripheralStructure,
    list: &[Vertex],
    index: &BTreeMap<Vertex, u32>,
    boundary: &[bool],
) -> Vec<Vec<u32>> {
    if !boundary.iter().any(|&b| b) {
        return Vec::new();
    }
    let Some(bs) = BlockStructure::new(model, periph) else {
        return vec![(0..list.len() as u32).filter(|&v| boundary[v as usize]).collect()];
    };
    let block_of_periph: BTreeMap<usize, usize> = bs
        .blocks
        .iter()
        .enumerate()
        .filter_map(|(b, blk)| blk.peripheral.map(|i| (i, b)))
        .collect();
    let mut pieces: BTreeMap<(usize, GroupElement), Piece> = BTreeMap::new();
    for (id, v) in list.iter().enumerate() {
        match v {
            Vertex::Group(g) => {
                for b in 0..bs.blocks.len() {
                    let (rep, k) = bs.split(g, b);
                    pieces.entry((b, rep)).or_default().members.push((id as u32, k));
                }
            }
            Vertex::Cone(key) => {
                let b = block_of_periph[&(key.index as usize)];
                pieces.entry((b, key.rep.clone())).or_default().cone = Some(id as u32);
            }
            Vertex::Id(_) => {}
        }
    }
    let mut groups: Vec<Vec<u32>> = Vec::new();
    for ((b, _), piece) in &pieces {
        let block = &bs.blocks[*b];
        let letters: Vec<Letter> = block
            .gens
            .iter()
            .flat_map(|&g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        let local_set: BTreeMap<&GroupElement, u32> =
            piece.members.iter().map(|(id, k)| (k, *id)).collect();
        if let Some(i) = block.peripheral {
            if piece.cone.is_none() {
                let key = match piece.members.first() {
                    Some((id, _)) => match &list[*id as usize] {
                        Vertex::Group(g) => periph.coset_key(model, i, g),
                        _ => continue,
                    },
                    None => continue,
                };
                debug_assert!(!index.contains_key(&Vertex::Cone(key)));
                groups.push(piece.members.iter().map(|(id, _)| *id).collect());
                continue;
            }
        }
        // Outside neighbours inside the piece, per member.
        let mut outside: Vec<(u32, GroupElement)> = Vec::new();
        for (id, k) in &piece.members {
            for &l in &letters {
                let w = model.mul_letter(k, l);
                if w == *k || local_set.contains_key(&w) {
                    continue;
                }
                outside.push((*id, w));
            }
        }
        let truncated_cone = piece.cone.is_some_and(|c| boundary[c as usize]);
        if outside.is_empty() && !truncated_cone {
            continue;
        }
        let mut piece_groups: Vec<Vec<u32>> = match block.local {
            LocalGroup::Finite { .. } => finite_components(model, &letters, &local_set),
            l if l.is_tree() => tree_components(model, &letters, &piece.members, &outside),
            _ => vec![outside.iter().map(|(id, _)| *id).collect()],
        };
        if piece.members.is_empty() {
            piece_groups = vec![Vec::new()];
        }
        if let Some(c) = piece.cone {
            for g in &mut piece_groups {
                g.push(c);
            }
        }
        groups.extend(piece_groups);
    }
    for g in &mut groups {
        g.sort_unstable();
        g.dedup();
    }
    groups.retain(|g| !g.is_empty());
    groups.sort();
    groups.dedup();
    groups
}

fn finite_components(
    model: &GroupModel,
    letters: &[Letter],
    members: &BTreeMap<&GroupElement, u32>,
) -> Vec<Vec<u32>> {
    let mut all: BTreeSet<GroupElement> = BTreeSet::new();
    let mut queue = VecDeque::from([GroupElement::identity()]);
    all.insert(GroupElement::identity());
    while let Some(x) = queue.pop_front() {
        for &l in letters {
            let y = model.mul_letter(&x, l);
            if all.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut out = Vec::new();
    for start in &all {
        if members.contains_key(start) || seen.contains(start) {
            continue;
        }
        let mut group = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(x) = queue.pop_front() {
            for &l in letters {
                let y = model.mul_letter(&x, l);
                if let Some(&id) = members.get(&y) {
                    group.push(id);
                } else if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        out.push(group);
    }
    out
}

fn tree_components(
    model: &GroupModel,
    letters: &[Letter],
    members: &[(u32, GroupElement)],
    outside: &[(u32, GroupElement)],
) -> Vec<Vec<u32>> {
    let Some((_, root)) = members.first() else { return Vec::new() };
    let root_inv = model.inverse(root);
    let translate = |k: &GroupElement| model.multiply(&root_inv, k);
    let member_set: BTreeSet<GroupElement> = members.iter().map(|(_, k)| translate(k)).collect();
    let mut hull: BTreeSet<GroupElement> = BTreeSet::new();
    for t in &member_set {
        for i in 0..=t.len() {
            hull.insert(model.canonicalize(&t.word()[..i]));
        }
    }
    let mut out = Vec::new();
    let mut attach: BTreeMap<GroupElement, Vec<u32>> = BTreeMap::new();
    for (id, w) in outside {
        let t = translate(w);
        if hull.contains(&t) {
            attach.entry(t).or_default().push(*id);
        } else {
            out.push(vec![*id]);
        }
    }
    let hull_outside: Vec<&GroupElement> = hull.iter().filter(|t| !member_set.contains(*t)).collect();
    let pos: BTreeMap<&GroupElement, usize> = hull_outside.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut parent: Vec<usize> = (0..hull_outside.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, t) in hull_outside.iter().enumerate() {
        for &l in letters {
            let y = model.mul_letter(t, l);
            if let Some(&j) = pos.get(&y) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (t, ids) in attach {
        let r = find(&mut parent, pos[&t]);
        comps.entry(r).or_default().extend(ids);
    }
    out.extend(comps.into_values());
    out
}
