use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::ball::Ball;
use super::bfs::bfs_all;
use super::INF;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    /// Every triangle; quadratic memory, for small graphs.
    Exact,
    /// Random triangles and random points on their sides.
    Sampled { samples: usize },
}

/// Largest thinness found, with the triangle `(x, y, z)` and the point `p`
/// on a geodesic from `x` to `y` that realise it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaEstimate {
    /// `max(thinness, 1)`.
    pub delta: u32,
    pub thinness: u32,
    pub witness: Option<[u32; 4]>,
    pub triangles: u64,
    /// Exact for the graph `B` itself when every triangle was examined.
    pub exhaustive: bool,
}

/// Thinness of geodesic triangles in `B`: the largest, over triangles and
/// over points `p` on one side, of the distance from `p` to the union of the
/// other two sides, with the other sides chosen as far from `p` as possible.
pub fn estimate_delta<R: Rng>(ball: &Ball, mode: DeltaMode, rng: &mut R) -> DeltaEstimate {
    let n = ball.len();
    let mut best = DeltaEstimate { delta: 1, thinness: 0, witness: None, triangles: 0, exhaustive: false };
    if n == 0 {
        best.exhaustive = true;
        return best;
    }
    match mode {
        DeltaMode::Exact => {
            let rows: Vec<Vec<u32>> = (0..n as u32).map(|s| bfs_all(&ball.graph, &[s])).collect();
            let dist = |u: u32, v: u32| rows[u as usize][v as usize];
            for x in 0..n as u32 {
                for y in 0..n as u32 {
                    if dist(x, y) == INF {
                        continue;
                    }
                    let side = interval_by_level(ball, &rows[x as usize], &rows[y as usize]);
                    for z in 0..n as u32 {
                        if dist(x, z) == INF {
                            continue;
                        }
                        best.triangles += 1;
                        for &p in side.iter().flatten() {
                            let rp = &rows[p as usize];
                            let t = bottleneck(ball, rp, &rows[y as usize], &rows[z as usize])
                                .min(bottleneck(ball, rp, &rows[x as usize], &rows[z as usize]));
                            if t > best.thinness || best.witness.is_none() {
                                best.thinness = best.thinness.max(t);
                                best.witness = Some([x, y, z, p]);
                            }
                        }
                    }
                }
            }
            best.exhaustive = true;
        }
        DeltaMode::Sampled { samples } => {
            for _ in 0..samples {
                let x = rng.gen_range(0..n as u32);
                let y = rng.gen_range(0..n as u32);
                let z = rng.gen_range(0..n as u32);
                let rx = bfs_all(&ball.graph, &[x]);
                if rx[y as usize] == INF || rx[z as usize] == INF {
                    continue;
                }
                let ry = bfs_all(&ball.graph, &[y]);
                let rz = bfs_all(&ball.graph, &[z]);
                let side: Vec<u32> = interval_by_level(ball, &rx, &ry).into_iter().flatten().collect();
                let p = side[rng.gen_range(0..side.len())];
                let rp = bfs_all(&ball.graph, &[p]);
                best.triangles += 1;
                let t = bottleneck(ball, &rp, &ry, &rz).min(bottleneck(ball, &rp, &rx, &rz));
                if t > best.thinness || best.witness.is_none() {
                    best.thinness = best.thinness.max(t);
                    best.witness = Some([x, y, z, p]);
                }
            }
        }
    }
    best.delta = best.thinness.max(1);
    best
}

fn interval_by_level(ball: &Ball, ra: &[u32], rb: &[u32]) -> Vec<Vec<u32>> {
    let (a, _) = ra.iter().enumerate().find(|(_, &d)| d == 0).expect("row has a source");
    let d = rb[a];
    let mut levels = vec![Vec::new(); d as usize + 1];
    for v in 0..ball.len() {
        if ra[v] != INF && rb[v] != INF && ra[v] + rb[v] == d {
            levels[ra[v] as usize].push(v as u32);
        }
    }
    levels
}

/// Over all geodesics from the source of `ra` to the source of `rb`, the
/// largest possible minimum of `rp` along the geodesic.
fn bottleneck(ball: &Ball, rp: &[u32], ra: &[u32], rb: &[u32]) -> u32 {
    let levels = interval_by_level(ball, ra, rb);
    let mut val: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
    for (l, level) in levels.iter().enumerate() {
        for &v in level {
            let here = rp[v as usize];
            let best = if l == 0 {
                here
            } else {
                let prev = ball
                    .neighbours(v)
                    .iter()
                    .filter(|&&u| ra[u as usize] as usize == l - 1)
                    .filter_map(|u| val.get(u))
                    .copied()
                    .max()
                    .unwrap_or(0);
                here.min(prev)
            };
            val.insert(v, best);
        }
    }
    levels.last().and_then(|l| l.first()).and_then(|v| val.get(v)).copied().unwrap_or(0)
}
