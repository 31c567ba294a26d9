use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Vertex};

const UNASSIGNED: u32 = u32::MAX;

/// Partition of `[0, n)` into classes of one common size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    pub class_size: usize,
    pub classes: Vec<Vec<Vertex>>,
    pub class_of: Vec<u32>,
}

impl VertexPartition {
    /// Consecutive blocks `[0, k), [k, 2k), ...`.
    pub fn contiguous(n: usize, class_size: usize) -> Result<Self, GraphError> {
        if class_size == 0 || n % class_size != 0 {
            return Err(GraphError::NotDivisible { n, class_size });
        }
        let classes: Vec<Vec<Vertex>> = (0..n / class_size)
            .map(|c| ((c * class_size) as Vertex..((c + 1) * class_size) as Vertex).collect())
            .collect();
        let class_of = (0..n).map(|v| (v / class_size) as u32).collect();
        Ok(VertexPartition { class_size, classes, class_of })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Checks disjoint cover, exact class sizes and consistency of `class_of`.
    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        if self.class_of.len() != n {
            return Err(GraphError::InvariantViolation("class_of has wrong length".into()));
        }
        let mut seen = vec![false; n];
        for (c, class) in self.classes.iter().enumerate() {
            if class.len() != self.class_size {
                return Err(GraphError::InvariantViolation(format!(
                    "class {c} has {} vertices, expected {}",
                    class.len(),
                    self.class_size
                )));
            }
            for &v in class {
                let v = v as usize;
                if v >= n || seen[v] || self.class_of[v] as usize != c {
                    return Err(GraphError::InvariantViolation(format!("vertex {v} misassigned")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(GraphError::InvariantViolation("partition does not cover".into()));
        }
        Ok(())
    }

    /// True when no edge of `g` joins two vertices of the same class.
    pub fn is_independent_in(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.class_of[u] != self.class_of[v])
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionOptions {
    /// Maximum number of eviction steps; `None` means `100 * n`.
    pub repair_budget: Option<usize>,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { repair_budget: None }
    }
}

/// Equitable proper colouring of `h` with classes of exactly `class_size`
/// vertices.
///
/// A greedy pass in random order puts each vertex into the least-filled
/// non-full class that holds none of its neighbours. Vertices that find no
/// such class are placed by eviction: the vertex enters the class where it
/// has the fewest neighbours, those neighbours are evicted and re-placed the
/// same way, never straight back into the class they were evicted from.
pub fn equitable_partition(
    h: &Graph,
    class_size: usize,
    seed: u64,
    options: PartitionOptions,
) -> Result<VertexPartition, GraphError> {
    let n = h.n();
    if class_size == 0 || n % class_size != 0 {
        return Err(GraphError::NotDivisible { n, class_size });
    }
    let num_classes = n / class_size;
    let max_degree = h.max_degree();
    if class_size + max_degree > n {
        // the class of a maximum-degree vertex must avoid all its neighbours
        return Err(GraphError::TooFewClasses { classes: num_classes, class_size, max_degree });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(&mut rng);

    let mut state = Placement {
        h,
        class_size,
        classes: vec![Vec::with_capacity(class_size); num_classes],
        class_of: vec![UNASSIGNED; n],
        conflicts: vec![0; num_classes],
        touched: Vec::new(),
    };

    let mut budget = options.repair_budget.unwrap_or(100 * n.max(1));
    let mut pending: VecDeque<(Vertex, u32)> = VecDeque::new();
    for &v in &order {
        if state.place_greedy(v) {
            continue;
        }
        pending.push_back((v, UNASSIGNED));
        while let Some((w, tabu)) = pending.pop_front() {
            if state.place_greedy(w) {
                continue;
            }
            if budget == 0 {
                return Err(GraphError::RepairBudgetExceeded { vertex: w as usize });
            }
            budget -= 1;
            let Some(target) = state.least_conflicted(w, tabu, &mut rng) else {
                return Err(GraphError::RepairBudgetExceeded { vertex: w as usize });
            };
            for evicted in state.evict_neighbors(w, target) {
                pending.push_back((evicted, target));
            }
            state.assign(w, target);
        }
    }

    let Placement { mut classes, class_of, .. } = state;
    for class in &mut classes {
        class.sort_unstable();
    }
    let partition = VertexPartition { class_size, classes, class_of };
    debug_assert!(partition.validate(n).is_ok());
    debug_assert!(partition.is_independent_in(h));
    Ok(partition)
}

struct Placement<'g> {
    h: &'g Graph,
    class_size: usize,
    classes: Vec<Vec<Vertex>>,
    class_of: Vec<u32>,
    conflicts: Vec<u32>,
    touched: Vec<u32>,
}

impl Placement<'_> {
    fn count_conflicts(&mut self, v: Vertex) {
        for &c in &self.touched {
            self.conflicts[c as usize] = 0;
        }
        self.touched.clear();
        for &u in self.h.neighbors(v as usize) {
            let c = self.class_of[u as usize];
            if c != UNASSIGNED {
                if self.conflicts[c as usize] == 0 {
                    self.touched.push(c);
                }
                self.conflicts[c as usize] += 1;
            }
        }
    }

    fn assign(&mut self, v: Vertex, c: u32) {
        self.classes[c as usize].push(v);
        self.class_of[v as usize] = c;
    }

    fn place_greedy(&mut self, v: Vertex) -> bool {
        self.count_conflicts(v);
        let best = (0..self.classes.len())
            .filter(|&c| self.classes[c].len() < self.class_size && self.conflicts[c] == 0)
            .min_by_key(|&c| self.classes[c].len());
        match best {
            Some(c) => {
                self.assign(v, c as u32);
                true
            }
            None => false,
        }
    }

    /// Class other than `tabu` where `v` has the fewest neighbours, ties
    /// broken at random. Full classes qualify because evicting at least one
    /// neighbour frees the slot `v` takes.
    fn least_conflicted(&mut self, v: Vertex, tabu: u32, rng: &mut ChaCha8Rng) -> Option<u32> {
        self.count_conflicts(v);
        let eligible = |c: usize, this: &Self| {
            c as u32 != tabu && (this.conflicts[c] > 0 || this.classes[c].len() < this.class_size)
        };
        let min = (0..self.classes.len())
            .filter(|&c| eligible(c, self))
            .map(|c| self.conflicts[c])
            .min()?;
        let ties: Vec<u32> = (0..self.classes.len())
            .filter(|&c| eligible(c, self) && self.conflicts[c] == min)
            .map(|c| c as u32)
            .collect();
        Some(ties[rng.gen_range(0..ties.len())])
    }

    fn evict_neighbors(&mut self, v: Vertex, c: u32) -> Vec<Vertex> {
        let h = self.h;
        let class_of = &mut self.class_of;
        let class = &mut self.classes[c as usize];
        let mut evicted = Vec::new();
        class.retain(|&u| {
            if h.has_edge(u as usize, v as usize) {
                class_of[u as usize] = UNASSIGNED;
                evicted.push(u);
                false
            } else {
                true
            }
        });
        evicted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_cycle, gen_random_regular, RandomRegularOptions};

    #[test]
    fn edgeless_graph_splits_freely() {
        let g = Graph::from_edges(6, &[]).unwrap();
        let p = equitable_partition(&g, 2, 1, PartitionOptions::default()).unwrap();
        assert_eq!(p.num_classes(), 3);
        p.validate(6).unwrap();
    }

    #[test]
    fn four_cycle_has_antipodal_classes() {
        let g = gen_cycle(4).unwrap();
        for seed in 0..10 {
            let p = equitable_partition(&g, 2, seed, PartitionOptions::default()).unwrap();
            let mut classes = p.classes.clone();
            classes.sort();
            assert_eq!(classes, vec![vec![0, 2], vec![1, 3]]);
        }
    }

    #[test]
    fn complete_graph_has_no_independent_pair() {
        let g = gen_complete(4);
        let err = equitable_partition(&g, 2, 0, PartitionOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            GraphError::TooFewClasses { .. } | GraphError::RepairBudgetExceeded { .. }
        ));
    }

    #[test]
    fn rejects_non_divisor() {
        let g = gen_cycle(6).unwrap();
        assert!(matches!(
            equitable_partition(&g, 4, 0, PartitionOptions::default()),
            Err(GraphError::NotDivisible { n: 6, class_size: 4 })
        ));
    }

    #[test]
    fn random_regular_partitions_are_proper_and_exact() {
        for seed in 0..5 {
            let h = gen_random_regular(600, 6, seed, RandomRegularOptions::default()).unwrap();
            let p = equitable_partition(&h, 20, seed, PartitionOptions::default()).unwrap();
            p.validate(600).unwrap();
            assert!(p.is_independent_in(&h));
            assert!(p.classes.iter().all(|c| c.len() == 20));
        }
    }

    #[test]
    fn tight_regime_needs_repairs_but_succeeds() {
        // 8 classes for a 6-regular graph: close to the Hajnal-Szemeredi edge
        let h = gen_random_regular(64, 6, 3, RandomRegularOptions::default()).unwrap();
        let p = equitable_partition(&h, 8, 3, PartitionOptions::default()).unwrap();
        assert!(p.is_independent_in(&h));
        p.validate(64).unwrap();
    }

    #[test]
    fn contiguous_blocks() {
        let p = VertexPartition::contiguous(6, 3).unwrap();
        assert_eq!(p.classes, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(p.class_of, vec![0, 0, 0, 1, 1, 1]);
    }
}
