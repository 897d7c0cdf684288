#![allow(dead_code)]

pub mod flow;
pub mod graph;

use rand::Rng;

/// Random tree on `n` vertices as a parent list, vertex 0 the root.
pub fn random_parents<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    (1..n).map(|i| rng.gen_range(0..i as u32)).collect()
}
