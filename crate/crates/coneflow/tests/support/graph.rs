//! Brute-force graph geometry on plain adjacency lists. Nothing here is
//! cached and nothing is shared with the library.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use coneflow::Ball;

pub type Adj = Vec<Vec<u32>>;

pub fn adjacency(ball: &Ball) -> Adj {
    (0..ball.len() as u32).map(|v| ball.neighbours(v).to_vec()).collect()
}

pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Adj {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v && !adj[u as usize].contains(&v) {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    adj
}

pub fn edge_list_text(adj: &Adj) -> String {
    let mut out = String::new();
    for (u, ns) in adj.iter().enumerate() {
        out.push_str(&format!("{u}\n"));
        for &v in ns {
            if (u as u32) < v {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    out
}

/// Distance from `s` to `t` avoiding `skip`, `None` if unreachable.
pub fn dist_avoiding(adj: &Adj, s: u32, t: u32, skip: Option<u32>) -> Option<u32> {
    if Some(s) == skip || Some(t) == skip {
        return None;
    }
    let mut d = vec![u32::MAX; adj.len()];
    d[s as usize] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        if u == t {
            return Some(d[u as usize]);
        }
        for &w in &adj[u as usize] {
            if Some(w) != skip && d[w as usize] == u32::MAX {
                d[w as usize] = d[u as usize] + 1;
                q.push_back(w);
            }
        }
    }
    None
}

pub fn dist(adj: &Adj, s: u32, t: u32) -> u32 {
    dist_avoiding(adj, s, t, None).expect("connected")
}

/// Angle at `v` between the edges `u → v` and `v → w`; `None` is infinite.
pub fn angle(adj: &Adj, u: u32, v: u32, w: u32) -> Option<u32> {
    if u == w {
        return Some(0);
    }
    dist_avoiding(adj, u, w, Some(v))
}

fn gt(a: Option<u32>, theta: u64) -> bool {
    a.is_none_or(|a| u64::from(a) > theta)
}

/// Whether some first edges of geodesics from `c` to `x1` and to `x2`
/// meet at an angle above `theta`.
pub fn vertex_angle_gt(adj: &Adj, c: u32, x1: u32, x2: u32, theta: u64) -> bool {
    if c == x1 || c == x2 {
        return false;
    }
    let first = |x: u32| -> Vec<u32> {
        let d = dist(adj, c, x);
        adj[c as usize].iter().copied().filter(|&u| dist(adj, u, x) + 1 == d).collect()
    };
    let (f1, f2) = (first(x1), first(x2));
    f1.iter().any(|&u1| f2.iter().any(|&u2| gt(angle(adj, u1, c, u2), theta)))
}

/// Vertices on paths that start with `o → t`, have length at most
/// `theta` and turn by at most `theta` at every vertex. Searches directed
/// edges by least path length.
pub fn cone(adj: &Adj, o: u32, t: u32, theta: u32) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([o]);
    if theta == 0 {
        return out;
    }
    let mut best = BTreeMap::from([((o, t), 1)]);
    let mut q = VecDeque::from([(o, t)]);
    while let Some((prev, cur)) = q.pop_front() {
        out.insert(cur);
        let len = best[&(prev, cur)];
        if len == theta {
            continue;
        }
        for &next in &adj[cur as usize] {
            if angle(adj, prev, cur, next).is_some_and(|a| a <= theta) && !best.contains_key(&(cur, next)) {
                best.insert((cur, next), len + 1);
                q.push_back((cur, next));
            }
        }
    }
    out
}

/// All geodesics from `s` to `t` as vertex sequences.
pub fn geodesics(adj: &Adj, s: u32, t: u32) -> Vec<Vec<u32>> {
    let d = dist(adj, s, t);
    let mut out = Vec::new();
    let mut stack = vec![vec![s]];
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if last == t {
            out.push(p);
            continue;
        }
        let k = p.len() as u32;
        for &w in &adj[last as usize] {
            if dist(adj, w, t) + k == d {
                let mut q = p.clone();
                q.push(w);
                stack.push(q);
            }
        }
    }
    out
}

/// Largest distance from a point of one side of a geodesic triangle to the
/// union of the other two sides, over all triangles and choices of sides.
pub fn thinness(adj: &Adj) -> u32 {
    let n = adj.len() as u32;
    let rows: Vec<Vec<u32>> = (0..n).map(|s| (0..n).map(|t| dist(adj, s, t)).collect()).collect();
    let geos: Vec<Vec<Vec<Vec<u32>>>> = (0..n).map(|s| (0..n).map(|t| geodesics(adj, s, t)).collect()).collect();
    let mut best = 0;
    for x in 0..n as usize {
        for y in 0..n as usize {
            for z in 0..n as usize {
                for side in &geos[x][y] {
                    for g1 in &geos[y][z] {
                        for g2 in &geos[x][z] {
                            for &p in side {
                                let to = |g: &Vec<u32>| g.iter().map(|&v| rows[p as usize][v as usize]).min().unwrap();
                                best = best.max(to(g1).min(to(g2)));
                            }
                        }
                    }
                }
            }
        }
    }
    best
}
