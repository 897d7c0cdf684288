use alloc::collections::{BTreeMap, VecDeque};
use alloc::rc::Rc;
use alloc::vec::Vec;

use super::ball::Ball;
use super::bfs::{bfs_all, Csr, Scratch};
use super::blocks::Blocks;
use super::cone::{Cone, ConeMode};
use super::{Angle, GeomError, OrientedEdge, Tri, INF};

/// Marker in angle rows for "deeper than the row's cap".
pub(crate) const DEEP: u32 = INF - 1;

const ROW_BUDGET_BYTES: usize = 256 << 20;

/// Bounds `lo ≤ d ≤ hi` on a distance in the full graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistBound {
    pub lo: u32,
    pub hi: u32,
}

impl DistBound {
    pub fn exact(self) -> Option<u32> {
        (self.lo == self.hi && self.hi != INF).then_some(self.hi)
    }
}

/// Bounds on an angle: `lo` is a lower bound, `hi` an upper bound, `INF`
/// meaning infinite or unbounded respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngleBound {
    pub lo: u32,
    pub hi: u32,
}

impl AngleBound {
    pub fn exceeds(self, theta: u64) -> Tri {
        if self.lo == INF || u64::from(self.lo) > theta {
            Tri::True
        } else if self.hi != INF && u64::from(self.hi) <= theta {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    /// The certified angle, reporting anything beyond `cap` as such.
    pub fn certified(self, cap: u64) -> Option<Angle> {
        if self.lo == INF {
            Some(Angle::Infinite)
        } else if u64::from(self.lo) > cap {
            Some(Angle::GreaterThanCap(cap))
        } else if self.lo == self.hi {
            Some(Angle::Finite(u64::from(self.lo)))
        } else {
            None
        }
    }
}

/// Breadth-first distances from one vertex in `B` and in `B⁺`.
#[derive(Clone, Debug)]
pub struct DistRow {
    hi: Vec<u32>,
    lo: Option<Vec<u32>>,
}

impl DistRow {
    pub fn hi(&self, v: u32) -> u32 {
        self.hi[v as usize]
    }

    pub fn lo(&self, v: u32) -> u32 {
        match &self.lo {
            Some(l) => l[v as usize],
            None => self.hi[v as usize],
        }
    }

    pub fn bound(&self, v: u32) -> DistBound {
        DistBound { lo: self.lo(v), hi: self.hi(v) }
    }

    /// Lower bound on the distance to every omitted vertex behind leak
    /// group `g`.
    pub fn hub(&self, n: usize, g: usize) -> u32 {
        self.lo.as_ref().map_or(INF, |l| l[n + g])
    }
}

/// The vertices of all geodesics from `a` to `x`, by level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub a: u32,
    pub x: u32,
    pub d: u32,
    pub levels: Vec<Vec<u32>>,
}

impl Interval {
    pub fn contains(&self, v: u32, level: u32) -> bool {
        self.levels.get(level as usize).is_some_and(|l| l.binary_search(&v).is_ok())
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.levels.iter().flatten().copied()
    }
}

/// Distances around a vertex with the vertex removed, from one neighbour
/// to the others.
#[derive(Clone, Debug)]
pub(crate) struct AngleRow {
    pub cap: u32,
    /// Neighbour positions reached within `cap` and their distances, sorted.
    pub reached: Vec<(u32, u32)>,
    complete: bool,
    block: u32,
}

/// Cached certified geometry of one [`Ball`]. Caches live as long as the
/// value; distance rows are evicted least-recently-used.
pub struct Geometry<'b> {
    pub(crate) ball: &'b Ball,
    rows: BTreeMap<u32, (Rc<DistRow>, u64)>,
    row_clock: u64,
    row_limit: usize,
    pub(crate) angle_rows: BTreeMap<(u32, u32, bool), AngleRow>,
    pub(crate) cones: BTreeMap<(u32, u32, u32, ConeMode), Rc<Cone>>,
    intervals: BTreeMap<(u32, u32), Rc<Interval>>,
    scratch: Option<Scratch>,
    blocks_b: Option<Blocks>,
    blocks_p: Option<Blocks>,
}

impl<'b> Geometry<'b> {
    pub fn new(ball: &'b Ball) -> Self {
        let per_row = 4 * (ball.plus_graph().len() + if ball.plus.is_some() { ball.len() } else { 0 });
        let row_limit = (ROW_BUDGET_BYTES / per_row.max(1)).clamp(4, 4096);
        Geometry {
            ball,
            rows: BTreeMap::new(),
            row_clock: 0,
            row_limit,
            angle_rows: BTreeMap::new(),
            cones: BTreeMap::new(),
            intervals: BTreeMap::new(),
            scratch: None,
            blocks_b: None,
            blocks_p: None,
        }
    }

    pub fn ball(&self) -> &'b Ball {
        self.ball
    }

    /// Distances from `s` in `B` and `B⁺`.
    pub fn row(&mut self, s: u32) -> Rc<DistRow> {
        self.row_clock += 1;
        let clock = self.row_clock;
        if let Some((row, stamp)) = self.rows.get_mut(&s) {
            *stamp = clock;
            return row.clone();
        }
        if self.rows.len() >= self.row_limit {
            let oldest = self.rows.iter().min_by_key(|(_, (_, t))| *t).map(|(k, _)| *k);
            if let Some(k) = oldest {
                self.rows.remove(&k);
            }
        }
        let hi = bfs_all(&self.ball.graph, &[s]);
        let lo = self.ball.plus.as_ref().map(|p| bfs_all(p, &[s]));
        let row = Rc::new(DistRow { hi, lo });
        self.rows.insert(s, (row.clone(), clock));
        row
    }

    pub fn distance(&mut self, u: u32, v: u32) -> DistBound {
        self.row(u).bound(v)
    }

    /// The distance in the full graph, or why it is not known.
    pub fn certified_distance(&mut self, u: u32, v: u32) -> Result<u32, GeomError> {
        let b = self.distance(u, v);
        if b.lo == INF {
            return Err(GeomError::Disconnected { vertices: alloc::vec![u, v] });
        }
        b.exact().ok_or_else(|| GeomError::uncertified("distance", &[u, v]))
    }

    fn graph(&self, plus: bool) -> &'b Csr {
        if plus {
            self.ball.plus_graph()
        } else {
            &self.ball.graph
        }
    }

    fn blocks(&mut self, plus: bool) -> &Blocks {
        let plus = plus && self.ball.plus.is_some();
        let g = self.graph(plus);
        let slot = if plus { &mut self.blocks_p } else { &mut self.blocks_b };
        slot.get_or_insert_with(|| Blocks::new(g))
    }

    fn block_label(&self, plus: bool, e: usize) -> u32 {
        let blocks = if plus { self.blocks_p.as_ref() } else { self.blocks_b.as_ref() }
            .or(self.blocks_b.as_ref())
            .expect("blocks computed");
        blocks.of_entry(e)
    }

    /// Distances in the chosen graph with `v` removed, from `u` to the
    /// neighbours of `v` reached within `cap`.
    pub(crate) fn angle_row(&mut self, v: u32, u: u32, plus: bool, cap: u32) -> &AngleRow {
        let plus = plus && self.ball.plus.is_some();
        let key = (v, u, plus);
        let fresh = self.angle_rows.get(&key).is_some_and(|r| r.cap >= cap);
        if !fresh {
            let g = self.graph(plus);
            let entry = g.entry(v, u).expect("angle row along an edge");
            let n_nodes = self.ball.plus_graph().len();
            self.blocks(plus);
            let blocks = if plus { self.blocks_p.as_ref() } else { self.blocks_b.as_ref() }
                .or(self.blocks_b.as_ref())
                .expect("blocks computed");
            let block = blocks.of_entry(entry);
            let scratch = self.scratch.get_or_insert_with(|| Scratch::new(n_nodes));
            let (found, complete) = scratch.punctured(g, u, v, cap, Some((&blocks.label, block)));
            let start = g.range(v).start;
            let mut reached: Vec<(u32, u32)> = found
                .into_iter()
                .map(|(w, d)| ((g.entry(v, w).expect("neighbour") - start) as u32, d))
                .collect();
            reached.sort_unstable();
            self.angle_rows.insert(key, AngleRow { cap, reached, complete, block });
        }
        &self.angle_rows[&key]
    }

    /// Distance from `u` to `w` avoiding `v`: exact up to the row cap,
    /// `DEEP` beyond it and `INF` when unreachable.
    fn angle_value(&mut self, v: u32, u: u32, w: u32, plus: bool, cap: u32) -> (u32, u32) {
        let plus = plus && self.ball.plus.is_some();
        let g = self.graph(plus);
        let e = g.entry(v, w).expect("angle along an edge");
        let pos = (e - g.range(v).start) as u32;
        let row = self.angle_row(v, u, plus, cap);
        let (row_cap, complete, block) = (row.cap, row.complete, row.block);
        if let Ok(i) = row.reached.binary_search_by_key(&pos, |&(p, _)| p) {
            return (row.reached[i].1, row_cap);
        }
        let d = if complete || self.block_label(plus, e) != block { INF } else { DEEP };
        (d, row_cap)
    }

    /// Angle at `t(e1) = o(e2)` between two in-ball edges.
    pub fn angle(&mut self, e1: OrientedEdge, e2: OrientedEdge, cap: u32) -> AngleBound {
        assert_eq!(e1.t, e2.o, "edges must be consecutive");
        self.angle_at(e1.t, e1.o, e2.t, cap)
    }

    pub(crate) fn angle_at(&mut self, v: u32, u: u32, w: u32, cap: u32) -> AngleBound {
        if u == w {
            return AngleBound { lo: 0, hi: 0 };
        }
        let (h, _) = self.angle_value(v, u, w, false, cap);
        let hi = if h == DEEP { INF } else { h };
        if self.ball.plus.is_none() {
            let lo = if h == DEEP { cap.saturating_add(1) } else { h };
            return AngleBound { lo, hi };
        }
        let (l, row_cap) = self.angle_value(v, u, w, true, cap);
        let lo = if l == DEEP { row_cap.saturating_add(1) } else { l };
        AngleBound { lo, hi }
    }

    /// Bounds on the vertex angle at `c` between geodesics towards `x1` and
    /// `x2`, the largest angle between first edges of such geodesics.
    pub fn vertex_angle(&mut self, c: u32, x1: u32, x2: u32, cap: u32) -> Result<AngleBound, GeomError> {
        if c == x1 || c == x2 {
            return Ok(AngleBound { lo: 0, hi: 0 });
        }
        let mut sides: [(Vec<u32>, Vec<u32>, bool); 2] = Default::default();
        for (side, x) in sides.iter_mut().zip([x1, x2]) {
            let row = self.row(x);
            let d = row.bound(c).exact().ok_or_else(|| GeomError::uncertified("vertex angle distance", &[c, x]))?;
            for &u in self.ball.neighbours(c) {
                let b = row.bound(u);
                if b.hi == d - 1 {
                    side.0.push(u);
                } else if b.lo < d {
                    side.1.push(u);
                }
            }
            let n = self.ball.len();
            side.2 = self
                .ball
                .leaks
                .iter()
                .enumerate()
                .any(|(g, members)| members.binary_search(&c).is_ok() && row.hub(n, g) < d);
        }
        let mut lo = 0u32;
        let mut hi = 0u32;
        let (sure1, maybe1, out1) = sides[0].clone();
        let (sure2, maybe2, out2) = sides[1].clone();
        for &u1 in &sure1 {
            for &u2 in &sure2 {
                let b = self.angle_at(c, u1, u2, cap);
                lo = lo.max(b.lo);
            }
        }
        if out1 || out2 {
            hi = INF;
        } else {
            for &u1 in sure1.iter().chain(&maybe1) {
                for &u2 in sure2.iter().chain(&maybe2) {
                    let b = self.angle_at(c, u1, u2, cap);
                    hi = hi.max(b.hi);
                }
            }
        }
        Ok(AngleBound { lo, hi: hi.max(lo) })
    }

    /// Whether the vertex angle at `c` exceeds `theta`.
    pub fn vertex_angle_exceeds(&mut self, c: u32, x1: u32, x2: u32, theta: u64) -> Tri {
        let cap = u32::try_from(theta).unwrap_or(DEEP - 1).min(DEEP - 1);
        match self.vertex_angle(c, x1, x2, cap) {
            Ok(b) => b.exceeds(theta),
            Err(_) => Tri::Unknown,
        }
    }

    /// All vertices on geodesics from `a` to `x`, certified complete.
    pub fn interval(&mut self, a: u32, x: u32) -> Result<Rc<Interval>, GeomError> {
        if let Some(i) = self.intervals.get(&(a, x)) {
            return Ok(i.clone());
        }
        let ra = self.row(a);
        let rx = self.row(x);
        let d = self.certified_distance(a, x)?;
        let n = self.ball.len();
        let mut levels: Vec<Vec<u32>> = alloc::vec![Vec::new(); d as usize + 1];
        for v in 0..n as u32 {
            let hi = ra.hi(v).saturating_add(rx.hi(v));
            if hi == d {
                levels[ra.hi(v) as usize].push(v);
            } else if ra.lo(v).saturating_add(rx.lo(v)) <= d {
                return Err(GeomError::uncertified("interval membership", &[a, x, v]));
            }
        }
        for g in 0..self.ball.leaks.len() {
            if ra.hub(n, g).saturating_add(rx.hub(n, g)) <= d {
                return Err(GeomError::uncertified("interval leaves the ball", &self.ball.leaks[g]));
            }
        }
        let interval = Rc::new(Interval { a, x, d, levels });
        self.intervals.insert((a, x), interval.clone());
        Ok(interval)
    }

    /// Oriented edges of geodesics from `a` to `x` leaving level `rho`
    /// forwards, together with the reversed edges entering it.
    pub fn geodesic_edges(&mut self, a: u32, x: u32, rho: u32) -> Result<Vec<OrientedEdge>, GeomError> {
        let interval = self.interval(a, x)?;
        let mut out = Vec::new();
        let Some(here) = interval.levels.get(rho as usize) else { return Ok(out) };
        for &p in here {
            for &q in self.ball.neighbours(p) {
                if interval.contains(q, rho + 1) || (rho > 0 && interval.contains(q, rho - 1)) {
                    out.push(OrientedEdge::new(p, q));
                }
            }
        }
        Ok(out)
    }

    /// Certified cone: equal in `B` and `B⁺`, with no part outside the ball.
    pub fn cone(&mut self, e: OrientedEdge, theta: u32) -> Result<Rc<Cone>, GeomError> {
        let sure = self.cone_in(e, theta, ConeMode::Sure);
        if self.ball.plus.is_none() {
            return Ok(sure);
        }
        let opt = self.cone_in(e, theta, ConeMode::Optimistic);
        if !opt.hubs.is_empty() || opt.vertices != sure.vertices {
            return Err(GeomError::uncertified("cone", &[e.o, e.t]));
        }
        Ok(sure)
    }

    /// Vertices at distance `≤ r` from `v` inside `B`, in breadth-first order.
    pub fn ball_around(&self, v: u32, r: u32) -> Vec<u32> {
        let mut seen = BTreeMap::from([(v, 0u32)]);
        let mut order = alloc::vec![v];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = seen[&u];
            if d == r {
                continue;
            }
            for &w in self.ball.neighbours(u) {
                if let alloc::collections::btree_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
    }
}
