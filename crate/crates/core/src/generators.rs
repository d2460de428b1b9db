//! Deterministic graph families and seeded random corpora for tests,
//! benchmarks and demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeSet};

fn build(n: usize, edges: Vec<(usize, usize, f64)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator produces a valid connected graph")
}

/// Cycle on `n >= 3` vertices with unit weights.
pub fn cycle(n: usize) -> Graph {
    build(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect())
}

/// Path on `n >= 2` vertices with unit weights.
pub fn path(n: usize) -> Graph {
    build(n, (0..n - 1).map(|i| (i, i + 1, 1.0)).collect())
}

/// Complete graph on `n >= 2` vertices with unit weights.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, 1.0));
        }
    }
    build(n, edges)
}

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2–3.
pub fn dumbbell() -> Graph {
    build(
        6,
        vec![
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
            (2, 3, 1.0),
        ],
    )
}

/// `count` cliques of `size` vertices arranged in a ring. Clique `k` owns
/// vertices `k*size .. (k+1)*size`; its last vertex is joined to the first
/// vertex of clique `k+1` by a unit edge.
pub fn clique_ring(count: usize, size: usize) -> Graph {
    let n = count * size;
    let mut edges = Vec::with_capacity(count * (size * (size - 1) / 2 + 1));
    for k in 0..count {
        let base = k * size;
        for i in 0..size {
            for j in i + 1..size {
                edges.push((base + i, base + j, 1.0));
            }
        }
        if count > 1 {
            edges.push((base + size - 1, ((k + 1) % count) * size, 1.0));
        }
    }
    build(n, edges)
}

/// Vertices of clique `k` in [`clique_ring`].
pub fn ring_clique(k: usize, size: usize) -> NodeSet {
    NodeSet::new((k * size..(k + 1) * size).collect())
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `p`. Weights are drawn from [0.5, 3).
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (u, v) = (order[i], order[j]);
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u, v, rng.random_range(0.5..3.0)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(p) {
                edges.push((u, v, rng.random_range(0.5..3.0)));
            }
        }
    }
    build(n, edges)
}

/// Random nonempty seed set with vol(R) <= vol(V)/2.
pub fn random_seed_set(g: &Graph, seed: u64) -> NodeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.num_nodes();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let want = rng.random_range(1..=(n / 2).max(1));
    let half = g.total_volume() / 2.0;
    let mut chosen = Vec::new();
    let mut vol = 0.0;
    for v in ids {
        if chosen.len() == want {
            break;
        }
        if vol + g.degree(v) <= half {
            vol += g.degree(v);
            chosen.push(v);
        }
    }
    NodeSet::new(chosen)
}

/// Seeded corpus of small random connected graphs with `n` in `min_n..=max_n`.
pub fn small_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(min_n..=max_n);
            let p = rng.random_range(0.15..0.6);
            random_connected(n, p, rng.random())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_ring_shape() {
        let g = clique_ring(20, 10);
        assert_eq!(g.num_nodes(), 200);
        assert_eq!(g.num_edges(), 20 * 45 + 20);
        let c = ring_clique(3, 10);
        assert_eq!(g.cut(&c).unwrap(), 2.0);
        assert_eq!(g.volume(&c).unwrap(), 92.0);
    }

    #[test]
    fn random_graphs_are_reproducible() {
        assert_eq!(random_connected(10, 0.3, 7), random_connected(10, 0.3, 7));
        let g = random_connected(10, 0.3, 7);
        let r = random_seed_set(&g, 3);
        assert!(!r.is_empty());
        assert!(g.volume(&r).unwrap() <= g.total_volume() / 2.0);
    }
}
