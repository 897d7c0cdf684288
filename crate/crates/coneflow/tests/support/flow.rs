//! The flow step and masks computed straight from their definition on a
//! complete finite graph: every distance, angle and cone is recomputed by
//! brute force at every use.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::graph::{cone, dist, vertex_angle_gt, Adj};

pub type Measure = BTreeMap<u32, BigRational>;

pub struct FlowOracle<'a> {
    pub adj: &'a Adj,
    pub infinite: &'a [bool],
    pub delta: u32,
}

fn uniform(support: &[u32]) -> Measure {
    assert!(!support.is_empty(), "empty slice");
    let w = BigRational::new(BigInt::one(), BigInt::from(support.len()));
    support.iter().map(|&v| (v, w.clone())).collect()
}

impl FlowOracle<'_> {
    fn on_geodesic_edge(&self, a: u32, x: u32, p: u32, q: u32) -> bool {
        let d = dist(self.adj, a, x);
        dist(self.adj, a, p) + 1 + dist(self.adj, q, x) == d || dist(self.adj, x, p) + 1 + dist(self.adj, q, a) == d
    }

    /// Edges `p → q` with `d(a, p) = rho` lying on a geodesic between `a`
    /// and `x` in either direction.
    pub fn geodesic_edges(&self, a: u32, x: u32, rho: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for p in 0..self.adj.len() as u32 {
            if dist(self.adj, a, p) != rho {
                continue;
            }
            for &q in &self.adj[p as usize] {
                if self.on_geodesic_edge(a, x, p, q) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn slice(&self, a: u32, x: u32, rho: u32) -> Vec<u32> {
        let alpha = 2 * self.delta;
        let d = dist(self.adj, a, x);
        let edges = self.geodesic_edges(a, x, rho);
        let cones: Vec<_> = edges.iter().map(|&(p, q)| cone(self.adj, p, q, 40 * alpha)).collect();
        (0..self.adj.len() as u32)
            .filter(|&t| {
                let dt = dist(self.adj, a, t);
                dt == rho
                    && dt <= d
                    && dt + dist(self.adj, t, x) <= d + alpha
                    && cones.iter().all(|c| c.contains(&t))
            })
            .collect()
    }

    fn exceeds_somewhere(&self, a: u32, x: u32, theta: u64) -> Vec<u32> {
        (0..self.adj.len() as u32).filter(|&c| vertex_angle_gt(self.adj, c, a, x, theta)).collect()
    }

    /// `T_a(δ_x)`.
    pub fn step(&self, a: u32, x: u32) -> Measure {
        let d = dist(self.adj, a, x);
        let step = 5 * self.delta;
        if d > step {
            let r = (0..).take_while(|r| step * r < d).last().unwrap();
            return uniform(&self.slice(a, x, step * r));
        }
        let ending = d > 1 && self.infinite[a as usize]
            || d >= 1 && !self.infinite[a as usize] && !self.exceeds_somewhere(a, x, 1000 * u64::from(self.delta)).is_empty();
        if x == a || !ending {
            return Measure::from([(x, BigRational::one())]);
        }
        if self.infinite[a as usize] {
            return uniform(&self.slice(a, x, 1));
        }
        let candidates = self.exceeds_somewhere(a, x, 900 * u64::from(self.delta));
        let closest = candidates.iter().map(|&c| dist(self.adj, a, c)).min().expect("ending point");
        let at: Vec<u32> = candidates.into_iter().filter(|&c| dist(self.adj, a, c) == closest).collect();
        assert_eq!(at.len(), 1, "ending point not unique");
        Measure::from([(at[0], BigRational::one())])
    }

    pub fn apply(&self, a: u32, eta: &Measure) -> Measure {
        let mut out = Measure::new();
        for (&x, w) in eta {
            for (v, u) in self.step(a, x) {
                let slot = out.entry(v).or_insert_with(BigRational::zero);
                *slot += u * w;
            }
        }
        out.retain(|_, w| !w.is_zero());
        out
    }

    /// `μ_x(a)` and the number of steps that changed the measure.
    pub fn mask(&self, a: u32, x: u32) -> (Measure, u32) {
        let mut eta = Measure::from([(x, BigRational::one())]);
        for k in 0..=self.adj.len() as u32 {
            let next = self.apply(a, &eta);
            if next == eta {
                return (eta, k);
            }
            eta = next;
        }
        panic!("no fixed point");
    }
}
