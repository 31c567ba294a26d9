#![allow(dead_code)]

use percolab::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `G(n, q)` with a seeded generator.
pub fn random_graph(n: usize, q: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(q) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect()
}

/// `(size, e(U), e(U, U^c), |N(U)|)` of a bitmask set.
pub fn mask_quantities(adj: &[u32], mask: u32) -> (usize, usize, usize, usize) {
    let (mut twice_internal, mut boundary, mut nbhd) = (0, 0, 0u32);
    for v in 0..adj.len() {
        if mask >> v & 1 == 1 {
            twice_internal += (adj[v] & mask).count_ones() as usize;
            boundary += (adj[v] & !mask).count_ones() as usize;
            nbhd |= adj[v];
        }
    }
    (mask.count_ones() as usize, twice_internal / 2, boundary, (nbhd & !mask).count_ones() as usize)
}

/// Whether `mask` is connected in the graph given by `adj`.
pub fn connected(adj: &[u32], mask: u32) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = 1u32 << mask.trailing_zeros();
    loop {
        let mut grow = seen;
        for v in 0..adj.len() {
            if seen >> v & 1 == 1 {
                grow |= adj[v] & mask;
            }
        }
        if grow == seen {
            return seen == mask;
        }
        seen = grow;
    }
}
