//! Property checks on certified geometry: cone composition, the quadratic
//! angle bound for cones, vertices of large angle on every geodesic, and
//! conical thinness of triangles.
//!
//! Each check counts decided instances and instances the truncated ball
//! cannot decide, and returns the failing instances as witnesses.

use std::collections::BTreeSet;

use coneflow::fine_graph::{Ball, ConeMode, Geometry, Interval};
use coneflow::{OrientedEdge, Tri};
use rand::Rng;

/// Outcome of one property check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: u64,
    /// Instances the ball cannot decide.
    pub unknown: u64,
    /// Each failure lists the vertices involved.
    pub failures: Vec<Vec<u32>>,
}

impl Tally {
    pub fn record(&mut self, outcome: Tri, witness: impl FnOnce() -> Vec<u32>) {
        match outcome {
            Tri::True => self.checked += 1,
            Tri::False => {
                self.checked += 1;
                self.failures.push(witness());
            }
            Tri::Unknown => self.unknown += 1,
        }
    }

    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether the in-ball edge `e2` lies in the cone of parameter `theta` on
/// `e1` in the full graph.
fn in_cone(geo: &mut Geometry<'_>, e1: OrientedEdge, theta: u32, e2: (u32, u32)) -> Tri {
    if geo.cone_in(e1, theta, ConeMode::Sure).contains_edge(e2.0, e2.1) {
        return Tri::True;
    }
    let opt = geo.cone_in(e1, theta, ConeMode::Optimistic);
    if opt.contains_edge(e2.0, e2.1) || !opt.hubs.is_empty() {
        Tri::Unknown
    } else {
        Tri::False
    }
}

/// For every oriented edge `e`, every `e′` in the cone of parameter `β` on
/// `e` (in the direction it is traversed) and every `e″` in the cone of
/// parameter `α` on `e′`: `e″` is in the cone of parameter `α + β` on `e`.
pub fn cone_composition(ball: &Ball, params: &[(u32, u32)]) -> Tally {
    let mut geo = Geometry::new(ball);
    let mut tally = Tally::default();
    let edges: Vec<OrientedEdge> = ball.edges().collect();
    for &(alpha, beta) in params {
        for &e in &edges {
            let inner = geo.cone_in(e, beta, ConeMode::Sure);
            let mut reached: BTreeSet<(u32, u32)> = BTreeSet::new();
            for &e1 in &inner.oriented {
                reached.extend(geo.cone_in(e1, alpha, ConeMode::Sure).edges.iter().copied());
            }
            for e2 in reached {
                let t = in_cone(&mut geo, e, alpha + beta, e2);
                tally.record(t, || vec![e.o, e.t, e2.0, e2.1]);
            }
        }
    }
    tally
}

/// `(θ² + 3θ)/2`.
pub fn quadratic_angle_bound(theta: u32) -> u64 {
    let t = u64::from(theta);
    (t * t + 3 * t) / 2
}

/// For every oriented edge `e`, every `v` in the cone of parameter `θ` on
/// `e` and every `c ∉ {o(e), v}` within `θ/10` of both: the vertex angle at
/// `c` between `o(e)` and `v` is at most `(θ² + 3θ)/2`.
pub fn cone_angle_bound(ball: &Ball, thetas: &[u32]) -> Tally {
    let mut geo = Geometry::new(ball);
    let mut tally = Tally::default();
    let edges: Vec<OrientedEdge> = ball.edges().collect();
    for &theta in thetas {
        let near = theta / 10;
        let bound = quadratic_angle_bound(theta);
        let cap = u32::try_from(bound + 1).unwrap_or(u32::MAX - 2);
        for &e in &edges {
            let cone = geo.cone_in(e, theta, ConeMode::Sure);
            let around: Vec<u32> = geo.ball_around(e.o, near);
            for &v in &cone.vertices {
                if v == e.o {
                    continue;
                }
                for &c in &around {
                    if c == v || c == e.o {
                        continue;
                    }
                    let t = match geo.distance(c, v) {
                        d if d.hi <= near => match geo.vertex_angle(c, e.o, v, cap) {
                            Ok(b) => !b.exceeds(bound),
                            Err(_) => Tri::Unknown,
                        },
                        d if d.lo > near => continue,
                        _ => Tri::Unknown,
                    };
                    tally.record(t, || vec![e.o, e.t, v, c]);
                }
            }
        }
    }
    tally
}

fn on_every_geodesic(interval: &Interval, c: u32, level: u32) -> bool {
    interval.levels.get(level as usize).is_some_and(|l| l.as_slice() == [c])
}

/// For sampled pairs `(a, b)` and every `c`: if the vertex angle at `c`
/// exceeds `threshold`, then every geodesic from `a` to `b` passes
/// through `c`.
pub fn wide_angles_cut_geodesics<R: Rng>(ball: &Ball, threshold: u64, pairs: usize, rng: &mut R) -> Tally {
    let mut geo = Geometry::new(ball);
    let mut tally = Tally::default();
    let n = ball.len() as u32;
    if n == 0 {
        return tally;
    }
    for _ in 0..pairs {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let Ok(interval) = geo.interval(a, b) else {
            tally.unknown += 1;
            continue;
        };
        for c in 0..n {
            if c == a || c == b {
                continue;
            }
            match geo.vertex_angle_exceeds(c, a, b, threshold) {
                Tri::False => {}
                Tri::Unknown => tally.unknown += 1,
                Tri::True => {
                    let t = match geo.certified_distance(a, c) {
                        Ok(level) => Tri::from(on_every_geodesic(&interval, c, level)),
                        Err(_) => Tri::Unknown,
                    };
                    tally.record(t, || vec![a, b, c]);
                }
            }
        }
    }
    tally
}

/// A geodesic from `a` to `b` chosen uniformly at each step among the
/// certified geodesic vertices of the next level.
pub fn random_geodesic<R: Rng>(geo: &mut Geometry<'_>, a: u32, b: u32, rng: &mut R) -> Option<Vec<u32>> {
    let interval = geo.interval(a, b).ok()?;
    let ball = geo.ball();
    let mut path = vec![a];
    for level in 1..=interval.d {
        let here = *path.last().expect("path starts at a");
        let next: Vec<u32> =
            ball.neighbours(here).iter().copied().filter(|&w| interval.contains(w, level)).collect();
        if next.is_empty() {
            return None;
        }
        path.push(next[rng.gen_range(0..next.len())]);
    }
    Some(path)
}

/// For sampled triangles with randomly chosen geodesic sides: every edge
/// of the side from `x` to `y` lies in the cone of parameter `theta` on
/// the edge at the same distance from the shared corner on one of the
/// other two sides. Returns the tally and the number of triangles.
pub fn conical_thinness<R: Rng>(ball: &Ball, theta: u32, triangles: usize, rng: &mut R) -> (Tally, u64) {
    let mut geo = Geometry::new(ball);
    let mut tally = Tally::default();
    let n = ball.len() as u32;
    let mut done = 0u64;
    let mut attempts = 0;
    while (done as usize) < triangles && attempts < 50 * triangles.max(1) {
        attempts += 1;
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let sides = (random_geodesic(&mut geo, x, y, rng), random_geodesic(&mut geo, x, z, rng), random_geodesic(&mut geo, y, z, rng));
        let (Some(xy), Some(xz), Some(yz)) = sides else { continue };
        done += 1;
        let m = xy.len() - 1;
        for i in 0..m {
            let e = (xy[i].min(xy[i + 1]), xy[i].max(xy[i + 1]));
            let mut candidates = Vec::new();
            if i + 1 < xz.len() {
                candidates.push(OrientedEdge::new(xz[i], xz[i + 1]));
            }
            let j = m - 1 - i;
            if j + 1 < yz.len() {
                candidates.push(OrientedEdge::new(yz[j], yz[j + 1]));
            }
            let mut verdict = Tri::False;
            for c in candidates {
                for dir in [c, c.reversed()] {
                    verdict = verdict.or(in_cone(&mut geo, dir, theta, e));
                }
            }
            tally.record(verdict, || vec![x, y, z, e.0, e.1]);
        }
    }
    (tally, done)
}
