use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub radius: usize,
    /// Vertices whose ball induces a forest.
    pub cycle_free: usize,
    pub flags: Vec<bool>,
}

/// Flags every vertex `v` whose ball `B(v, radius)` induces an acyclic
/// subgraph. The ball is connected, so it is acyclic exactly when it spans
/// `|B| - 1` edges.
pub fn short_cycle_census(g: &Graph, radius: usize) -> CycleCensus {
    let n = g.n();
    let mut stamp = vec![u32::MAX; n];
    let mut dist = vec![0usize; n];
    let mut ball: Vec<u32> = Vec::new();
    let mut flags = vec![false; n];
    for v in 0..n {
        let tag = v as u32;
        ball.clear();
        ball.push(v as u32);
        stamp[v] = tag;
        dist[v] = 0;
        let mut head = 0;
        while head < ball.len() {
            let u = ball[head] as usize;
            head += 1;
            if dist[u] == radius {
                continue;
            }
            for &w in g.neighbors(u) {
                if stamp[w as usize] != tag {
                    stamp[w as usize] = tag;
                    dist[w as usize] = dist[u] + 1;
                    ball.push(w);
                }
            }
        }
        let mut twice_edges = 0usize;
        for &u in &ball {
            twice_edges += g.neighbors(u as usize).iter().filter(|&&w| stamp[w as usize] == tag).count();
        }
        flags[v] = twice_edges / 2 + 1 == ball.len();
    }
    CycleCensus { radius, cycle_free: flags.iter().filter(|&&f| f).count(), flags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_cycle};

    #[test]
    fn closed_cases() {
        let tree = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        for r in 0..5 {
            assert_eq!(short_cycle_census(&tree, r).cycle_free, 6);
        }
        let c9 = gen_cycle(9).unwrap();
        assert_eq!(short_cycle_census(&c9, 3).cycle_free, 9);
        assert_eq!(short_cycle_census(&c9, 4).cycle_free, 0);
        assert_eq!(short_cycle_census(&gen_complete(4), 1).cycle_free, 0);
        assert_eq!(short_cycle_census(&gen_complete(4), 0).cycle_free, 4);
    }
}
