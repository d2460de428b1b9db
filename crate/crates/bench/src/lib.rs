//! Shared fixtures for the benchmark suite.

use localcut::generators;
use localcut::{Graph, NodeSet};

/// A ring of `count` cliques of `size` vertices and a seed inside clique 0.
pub fn clique_ring_fixture(count: usize, size: usize) -> (Graph, usize) {
    (generators::clique_ring(count, size), size / 2)
}

/// A random connected graph with a reproducible seed set.
pub fn random_fixture(n: usize, p: f64, seed: u64) -> (Graph, NodeSet) {
    let g = generators::random_connected(n, p, seed);
    let r = generators::random_seed_set(&g, seed ^ 0x9e37);
    (g, r)
}
