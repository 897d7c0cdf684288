use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::ball::{Ball, Names};
use super::bfs::Csr;
use super::Vertex;

/// The path through `0, 1, …, n` in order.
pub fn path(n: u32) -> Ball {
    let lists: Vec<Vec<u32>> = (0..=n)
        .map(|i| {
            let mut l = Vec::with_capacity(2);
            if i > 0 {
                l.push(i - 1);
            }
            if i < n {
                l.push(i + 1);
            }
            l
        })
        .collect();
    Ball::from_csr(Csr::from_lists(&lists), vec![false; n as usize + 1])
}

/// The cycle on `n ≥ 3` vertices.
pub fn cycle(n: u32) -> Ball {
    assert!(n >= 3, "cycle needs at least three vertices");
    let lists: Vec<Vec<u32>> = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
    Ball::from_csr(Csr::from_lists(&lists), vec![false; n as usize])
}

/// Tree with `parents[i]` the parent of vertex `i + 1`; vertex 0 is the root.
pub fn tree_from_parents(parents: &[u32]) -> Ball {
    let n = parents.len() + 1;
    let mut lists = vec![Vec::new(); n];
    for (i, &p) in parents.iter().enumerate() {
        assert!((p as usize) <= i, "parent must precede child");
        lists[i + 1].push(p);
        lists[p as usize].push(i as u32 + 1);
    }
    Ball::from_csr(Csr::from_lists(&lists), vec![false; n])
}

/// The path through `0, …, n` together with a hub `n + 1` joined to every path
/// vertex. The hub has infinite valence.
pub fn wheel_over_segment(n: u32) -> Ball {
    let hub = n + 1;
    let total = n as usize + 2;
    let mut offsets = Vec::with_capacity(total + 1);
    let mut targets = Vec::with_capacity(4 * (n as usize + 1));
    offsets.push(0u32);
    for i in 0..=n {
        if i > 0 {
            targets.push(i - 1);
        }
        if i < n {
            targets.push(i + 1);
        }
        targets.push(hub);
        offsets.push(targets.len() as u32);
    }
    targets.extend(0..=n);
    offsets.push(targets.len() as u32);
    let mut infinite = vec![false; total];
    infinite[hub as usize] = true;
    Ball::from_csr(Csr { offsets, targets }, infinite)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeListError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for EdgeListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for EdgeListError {}

/// Parses an undirected edge list.
///
/// Each non-empty line is `u v` (an edge), `v` (an isolated vertex) or
/// `cone v` (marks `v` as having infinite valence). `#` starts a comment.
/// Vertex names are non-negative integers.
pub fn from_edge_list(text: &str) -> Result<Ball, EdgeListError> {
    let mut ids: BTreeMap<u64, ()> = BTreeMap::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut cones: Vec<u64> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| EdgeListError { line: lineno + 1, message };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<u64>().map_err(|_| err(format!("bad vertex {s:?}")));
        match parts.as_slice() {
            ["cone", v] => {
                let v = num(v)?;
                ids.insert(v, ());
                cones.push(v);
            }
            [v] => {
                ids.insert(num(v)?, ());
            }
            [u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u == v {
                    return Err(err(format!("loop at {u}")));
                }
                ids.insert(u, ());
                ids.insert(v, ());
                edges.push((u, v));
            }
            _ => return Err(err(format!("cannot read {line:?}"))),
        }
    }
    let list: Vec<u64> = ids.into_keys().collect();
    let index: BTreeMap<u64, u32> = list.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let mut lists = vec![Vec::new(); list.len()];
    for (u, v) in edges {
        let (a, b) = (index[&u], index[&v]);
        lists[a as usize].push(b);
        lists[b as usize].push(a);
    }
    let mut infinite = vec![false; list.len()];
    for c in cones {
        infinite[index[&c] as usize] = true;
    }
    let n = list.len();
    Ok(Ball::assemble(lists, Names::Ids { list, index }, infinite, vec![false; n], Vec::new()))
}

/// Writes a graph in the format read by [`from_edge_list`].
pub fn to_edge_list(ball: &Ball) -> String {
    let name = |v: u32| match ball.vertex(v) {
        Vertex::Id(i) => i,
        _ => u64::from(v),
    };
    let mut out = String::new();
    for v in 0..ball.len() as u32 {
        if ball.degree(v) == 0 {
            let _ = writeln!(out, "{}", name(v));
        }
        if ball.infinite_valence(v) {
            let _ = writeln!(out, "cone {}", name(v));
        }
    }
    for e in ball.edges() {
        if e.o < e.t {
            let _ = writeln!(out, "{} {}", name(e.o), name(e.t));
        }
    }
    out
}
