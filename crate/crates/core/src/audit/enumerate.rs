//! Enumeration of connected vertex sets, each produced exactly once.
//!
//! Every set is generated from its minimum vertex (the anchor) by the
//! extension scheme of ESU: a set grows only by vertices larger than the
//! anchor that are adjacent to the newest member but not to any earlier
//! member, plus the pending extension candidates inherited from the parent.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{AuditError, Connectivity};
use crate::graph::Graph;

/// Default cap on the number of generated sets.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

pub(crate) trait SetVisitor {
    /// `v` has just become the last element of `set`. Returning `false`
    /// skips every extension of the current set.
    fn enter(&mut self, set: &[u32], v: u32) -> bool;
    /// `v` is about to be removed again.
    fn leave(&mut self, v: u32);
}

pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    #[inline]
    fn take(&self) -> bool {
        self.used.fetch_add(1, Ordering::Relaxed) < self.limit
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }
}

pub(crate) struct Esu<'g> {
    graph: &'g Graph,
    max_size: usize,
    in_set: Vec<bool>,
    /// Number of set members adjacent to each vertex.
    touch: Vec<u32>,
    set: Vec<u32>,
    pool: Vec<Vec<u32>>,
}

impl<'g> Esu<'g> {
    pub(crate) fn new(graph: &'g Graph, max_size: usize) -> Self {
        let n = graph.n();
        Esu {
            graph,
            max_size,
            in_set: vec![false; n],
            touch: vec![0; n],
            set: Vec::with_capacity(max_size),
            pool: vec![Vec::new(); max_size + 1],
        }
    }

    /// Visits every connected set of size at most `max_size` whose minimum
    /// is `anchor`. Returns `false` when the budget ran out.
    pub(crate) fn run_anchor<V: SetVisitor>(&mut self, anchor: u32, visitor: &mut V, budget: &Budget) -> bool {
        if self.max_size == 0 {
            return true;
        }
        if !budget.take() {
            return false;
        }
        let graph = self.graph;
        self.set.push(anchor);
        self.in_set[anchor as usize] = true;
        let mut ok = true;
        if visitor.enter(&self.set, anchor) && self.max_size > 1 {
            let mut ext = std::mem::take(&mut self.pool[0]);
            ext.clear();
            for &u in graph.neighbors(anchor as usize) {
                self.touch[u as usize] += 1;
                if u > anchor {
                    ext.push(u);
                }
            }
            ok = self.extend(anchor, &mut ext, 1, visitor, budget);
            for &u in graph.neighbors(anchor as usize) {
                self.touch[u as usize] -= 1;
            }
            self.pool[0] = ext;
        }
        visitor.leave(anchor);
        self.set.pop();
        self.in_set[anchor as usize] = false;
        ok
    }

    fn extend<V: SetVisitor>(
        &mut self,
        anchor: u32,
        ext: &mut Vec<u32>,
        depth: usize,
        visitor: &mut V,
        budget: &Budget,
    ) -> bool {
        let graph = self.graph;
        while let Some(w) = ext.pop() {
            if !budget.take() {
                return false;
            }
            self.set.push(w);
            self.in_set[w as usize] = true;
            let mut ok = true;
            if visitor.enter(&self.set, w) && self.set.len() < self.max_size {
                let mut next = std::mem::take(&mut self.pool[depth]);
                next.clear();
                next.extend_from_slice(ext);
                let nbrs = graph.neighbors(w as usize);
                for &u in nbrs {
                    if u > anchor && !self.in_set[u as usize] && self.touch[u as usize] == 0 {
                        next.push(u);
                    }
                }
                for &u in nbrs {
                    self.touch[u as usize] += 1;
                }
                ok = self.extend(anchor, &mut next, depth + 1, visitor, budget);
                for &u in nbrs {
                    self.touch[u as usize] -= 1;
                }
                self.pool[depth] = next;
            }
            visitor.leave(w);
            self.set.pop();
            self.in_set[w as usize] = false;
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Runs one visitor per worker over all anchors and returns the per-anchor
/// results in anchor order, plus whether the budget ran out.
pub(crate) fn run_anchors<V, R, M, F>(
    graph: &Graph,
    max_size: usize,
    budget: u64,
    make: M,
    finish: F,
) -> (Vec<R>, bool)
where
    V: SetVisitor,
    R: Send,
    M: Fn() -> V + Sync + Send,
    F: Fn(&mut V) -> R + Sync + Send,
{
    let budget = Budget::new(budget);
    let results: Vec<(bool, R)> = (0..graph.n() as u32)
        .into_par_iter()
        .map_init(
            || (Esu::new(graph, max_size), make()),
            |(esu, visitor), anchor| {
                let ok = esu.run_anchor(anchor, visitor, &budget);
                (ok, finish(visitor))
            },
        )
        .collect();
    let exhausted = results.iter().any(|(ok, _)| !ok);
    (results.into_iter().map(|(_, r)| r).collect(), exhausted)
}

struct Callback<F>(F);

impl<F: FnMut(&[u32])> SetVisitor for Callback<F> {
    fn enter(&mut self, set: &[u32], _v: u32) -> bool {
        (self.0)(set);
        true
    }

    fn leave(&mut self, _v: u32) {}
}

/// Calls `visit` once for every non-empty set of at most `max_size`
/// vertices that is connected under `connectivity`. Sets arrive in
/// generation order, not sorted; the first element is always the minimum.
///
/// Returns the number of sets produced.
pub fn enumerate_connected_sets(
    g: &Graph,
    max_size: usize,
    connectivity: Connectivity,
    budget: u64,
    visit: impl FnMut(&[u32]),
) -> Result<u64, AuditError> {
    if max_size == 0 {
        return Err(AuditError::InvalidParameter("max_size must be at least 1".into()));
    }
    let square;
    let graph = match connectivity {
        Connectivity::G => g,
        Connectivity::Square => {
            square = g.square();
            &square
        }
    };
    let mut esu = Esu::new(graph, max_size);
    let mut visitor = Callback(visit);
    let counter = Budget::new(budget);
    for anchor in 0..graph.n() as u32 {
        if !esu.run_anchor(anchor, &mut visitor, &counter) {
            return Err(AuditError::BudgetExceeded { budget });
        }
    }
    Ok(counter.used())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_cycle, gen_hypercube};
    use std::collections::BTreeSet;

    fn collect(g: &Graph, k: usize, c: Connectivity) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        enumerate_connected_sets(g, k, c, DEFAULT_BUDGET, |s| {
            let mut v = s.to_vec();
            v.sort_unstable();
            assert!(out.insert(v), "set produced twice");
        })
        .unwrap();
        out
    }

    #[test]
    fn path_in_g_and_square() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let g: Vec<Vec<u32>> = collect(&p3, 2, Connectivity::G).into_iter().collect();
        assert_eq!(g, vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2]]);
        let sq = collect(&p3, 2, Connectivity::Square);
        assert_eq!(sq.len(), 6);
        assert!(sq.contains(&vec![0, 2]));
    }

    #[test]
    fn complete_graph_has_every_subset() {
        assert_eq!(collect(&gen_complete(4), 4, Connectivity::G).len(), 15);
        assert_eq!(collect(&gen_complete(7), 3, Connectivity::G).len(), 7 + 21 + 35);
    }

    #[test]
    fn cycle_counts() {
        // C_n has n connected sets of each size below n and one of size n
        let c = gen_cycle(9).unwrap();
        assert_eq!(collect(&c, 9, Connectivity::G).len(), 8 * 9 + 1);
    }

    #[test]
    fn matches_subset_filter_on_the_cube() {
        let g = gen_hypercube(4).unwrap();
        let found = collect(&g, 5, Connectivity::G);
        let mut expected = BTreeSet::new();
        for mask in 1u32..(1 << 16) {
            if mask.count_ones() > 5 {
                continue;
            }
            let members: Vec<u32> = (0..16).filter(|v| mask >> v & 1 == 1).collect();
            // flood fill inside the mask
            let mut seen = 1u32 << members[0];
            let mut stack = vec![members[0]];
            while let Some(v) = stack.pop() {
                for &u in g.neighbors(v as usize) {
                    if mask >> u & 1 == 1 && seen >> u & 1 == 0 {
                        seen |= 1 << u;
                        stack.push(u);
                    }
                }
            }
            if seen == mask {
                expected.insert(members);
            }
        }
        assert_eq!(found, expected);
    }

    #[test]
    fn budget_is_enforced() {
        let g = gen_complete(10);
        assert!(matches!(
            enumerate_connected_sets(&g, 5, Connectivity::G, 100, |_| {}),
            Err(AuditError::BudgetExceeded { budget: 100 })
        ));
        assert!(enumerate_connected_sets(&g, 0, Connectivity::G, 100, |_| {}).is_err());
    }
}
