//! Site and bond percolation, component statistics and exploration.

mod explore;
mod sprinkle;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::ErrorKind;
use crate::graph::{Graph, Vertex};
use crate::gw::GwError;

pub use explore::{
    bfs_explore, BernoulliStream, BitStream, ConstantStream, ExplorationTrace, SliceStream,
    TraceSample,
};
pub use sprinkle::{lemma24_violations, two_round_exposure, ExposureParams, SprinklingReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercolationError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("subset over {found} vertices used with a graph on {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("bit stream ran dry after {rounds} queries")]
    StreamExhausted { rounds: usize },
    #[error("exploration order is not a permutation of 0..{n}")]
    InvalidOrder { n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Gw(#[from] GwError),
}

impl PercolationError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            PercolationError::StreamExhausted { .. } => ErrorKind::Runtime,
            PercolationError::Gw(e) => e.kind(),
            _ => ErrorKind::Validation,
        }
    }
}

fn check_probability(p: f64) -> Result<(), PercolationError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(PercolationError::InvalidProbability(p))
    }
}

/// A subset of `[0, n)` with a cached size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    bits: FixedBitSet,
    count: usize,
}

impl VertexSubset {
    pub fn empty(n: usize) -> Self {
        VertexSubset { bits: FixedBitSet::with_capacity(n), count: 0 }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSubset { bits, count: n }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for v in indices {
            set.insert(v);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Adds `v`; returns `true` if it was absent.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.bits.put(v);
        self.count += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.bits.contains(v);
        if present {
            self.bits.set(v, false);
            self.count -= 1;
        }
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn union_with(&mut self, other: &VertexSubset) {
        self.bits.union_with(&other.bits);
        self.count = self.bits.count_ones(..);
    }

    pub fn is_disjoint(&self, other: &VertexSubset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }
}

/// Union-find over `u32` labels with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    #[inline]
    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns `false` if already merged.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }
}

/// Label used in [`ComponentStats::component_of`] for vertices outside the
/// retained set.
pub const NOT_RETAINED: u32 = u32::MAX;

/// Component decomposition of an induced subgraph.
///
/// Components are numbered by decreasing size, ties broken by smallest
/// member, so `sizes[component_of[v]]` is the size of the component of `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentStats {
    pub sizes: Vec<usize>,
    pub l1: usize,
    pub l2: usize,
    pub component_of: Vec<u32>,
    pub retained: VertexSubset,
}

impl ComponentStats {
    /// Canonicalises arbitrary labels (equal label = same component).
    pub(crate) fn from_labels(retained: VertexSubset, raw: &[u32]) -> Self {
        let n = raw.len();
        let mut first = vec![usize::MAX; n];
        let mut count = vec![0usize; n];
        for v in retained.iter() {
            let r = raw[v] as usize;
            if first[r] == usize::MAX {
                first[r] = v;
            }
            count[r] += 1;
        }
        let mut roots: Vec<usize> = (0..n).filter(|&r| count[r] > 0).collect();
        roots.sort_unstable_by(|&a, &b| count[b].cmp(&count[a]).then(first[a].cmp(&first[b])));
        let mut rank = vec![NOT_RETAINED; n];
        for (id, &r) in roots.iter().enumerate() {
            rank[r] = id as u32;
        }
        let mut component_of = vec![NOT_RETAINED; n];
        for v in retained.iter() {
            component_of[v] = rank[raw[v] as usize];
        }
        let sizes: Vec<usize> = roots.iter().map(|&r| count[r]).collect();
        ComponentStats {
            l1: sizes.first().copied().unwrap_or(0),
            l2: sizes.get(1).copied().unwrap_or(0),
            sizes,
            component_of,
            retained,
        }
    }

    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    /// Members of every component, indexed by component id, each ascending.
    pub fn members(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for v in self.retained.iter() {
            out[self.component_of[v] as usize].push(v as Vertex);
        }
        out
    }

    /// `(size, count)` pairs in ascending size order.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist: Vec<(usize, usize)> = Vec::new();
        for &s in self.sizes.iter().rev() {
            match hist.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => hist.push((s, 1)),
            }
        }
        hist
    }
}

/// Components of `G[retained]`.
pub fn components(g: &Graph, retained: &VertexSubset) -> Result<ComponentStats, PercolationError> {
    if retained.universe() != g.n() {
        return Err(PercolationError::UniverseMismatch { expected: g.n(), found: retained.universe() });
    }
    let mut uf = UnionFind::new(g.n());
    for u in retained.iter() {
        for &v in g.neighbors(u) {
            if (v as usize) > u && retained.contains(v as usize) {
                uf.union(u as u32, v);
            }
        }
    }
    let raw: Vec<u32> = (0..g.n() as u32).map(|v| uf.find(v)).collect();
    Ok(ComponentStats::from_labels(retained.clone(), &raw))
}

/// Keeps every vertex independently with probability `p`.
pub fn sample_site(g: &Graph, p: f64, seed: u64) -> Result<VertexSubset, PercolationError> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_bernoulli(g.n(), p, &mut rng))
}

pub(crate) fn sample_bernoulli(n: usize, p: f64, rng: &mut impl Rng) -> VertexSubset {
    let mut set = VertexSubset::empty(n);
    for v in 0..n {
        if rng.gen_bool(p) {
            set.insert(v);
        }
    }
    set
}

/// Components after keeping every edge independently with probability `p`;
/// all vertices stay.
pub fn bond_components(g: &Graph, p: f64, seed: u64) -> Result<ComponentStats, PercolationError> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uf = UnionFind::new(g.n());
    for (u, v) in g.edges() {
        if rng.gen_bool(p) {
            uf.union(u as u32, v as u32);
        }
    }
    let raw: Vec<u32> = (0..g.n() as u32).map(|v| uf.find(v)).collect();
    Ok(ComponentStats::from_labels(VertexSubset::full(g.n()), &raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_hypercube};

    #[test]
    fn path_with_middle_removed() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let stats = components(&g, &VertexSubset::from_indices(3, [0, 2])).unwrap();
        assert_eq!(stats.sizes, vec![1, 1]);
        assert_eq!((stats.l1, stats.l2), (1, 1));
        assert_eq!(stats.component_of[1], NOT_RETAINED);
    }

    #[test]
    fn whole_and_empty_cube() {
        let g = gen_hypercube(3).unwrap();
        let all = components(&g, &VertexSubset::full(8)).unwrap();
        assert_eq!(all.sizes, vec![8]);
        assert_eq!((all.l1, all.l2), (8, 0));
        let none = components(&g, &VertexSubset::empty(8)).unwrap();
        assert!(none.sizes.is_empty());
        assert_eq!((none.l1, none.l2), (0, 0));
    }

    #[test]
    fn universe_mismatch() {
        let g = gen_complete(4);
        assert!(matches!(
            components(&g, &VertexSubset::empty(5)),
            Err(PercolationError::UniverseMismatch { expected: 4, found: 5 })
        ));
    }

    #[test]
    fn site_extremes() {
        let g = gen_hypercube(5).unwrap();
        assert_eq!(sample_site(&g, 1.0, 3).unwrap().count(), 32);
        assert_eq!(sample_site(&g, 0.0, 3).unwrap().count(), 0);
        assert!(matches!(sample_site(&g, 1.2, 3), Err(PercolationError::InvalidProbability(_))));
        assert_eq!(sample_site(&g, 0.4, 9).unwrap(), sample_site(&g, 0.4, 9).unwrap());
    }

    #[test]
    fn site_count_is_binomial() {
        let n = 100_000;
        let g = Graph::from_edges(n, &[]).unwrap();
        let p = 0.3;
        let trials = 100;
        let total: usize = (0..trials).map(|s| sample_site(&g, p, s).unwrap().count()).sum();
        let mean = total as f64 / trials as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((mean - 30_000.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn bond_extremes() {
        let g = gen_complete(3);
        assert_eq!(bond_components(&g, 1.0, 0).unwrap().sizes, vec![3]);
        let cube = gen_hypercube(4).unwrap();
        let single = bond_components(&cube, 0.0, 0).unwrap();
        assert_eq!(single.sizes, vec![1; 16]);
    }

    #[test]
    fn ids_follow_size_then_first_member() {
        let g = Graph::from_edges(6, &[(0, 1), (3, 4), (4, 5)]).unwrap();
        let stats = components(&g, &VertexSubset::full(6)).unwrap();
        assert_eq!(stats.sizes, vec![3, 2, 1]);
        assert_eq!(stats.component_of, vec![1, 1, 2, 0, 0, 0]);
        assert_eq!(stats.members(), vec![vec![3, 4, 5], vec![0, 1], vec![2]]);
        assert_eq!(stats.size_histogram(), vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn subset_operations() {
        let mut a = VertexSubset::from_indices(10, [1, 3, 5]);
        let b = VertexSubset::from_indices(10, [5, 7]);
        assert!(!a.is_disjoint(&b));
        assert!(!a.insert(3));
        assert!(a.remove(3));
        assert_eq!(a.count(), 2);
        a.union_with(&b);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 5, 7]);
        assert!(b.is_subset(&a));
    }
}
