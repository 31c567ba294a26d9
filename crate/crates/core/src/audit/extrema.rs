//! Exact per-size extrema of boundary and density quantities.
//!
//! Only connected sets are enumerated. This loses nothing for the extremum
//! over all sets of size at most `k`:
//!
//! - `e(U, U^c)` and `e(U)` are additive over the components of `G[U]`, so
//!   the ratio of a disconnected set is a weighted mean of the ratios of its
//!   pieces;
//! - the external neighbourhoods of the components of `U` in the square
//!   graph are pairwise disjoint and miss the other components, so
//!   `|N(U)|` is additive over those components.

use serde::{Deserialize, Serialize};

use super::enumerate::{run_anchors, SetVisitor};
use super::{AuditError, Connectivity};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `e(U, U^c)`, minimised.
    EdgeBoundary,
    /// `|N(U)|`, minimised.
    VertexBoundary,
    /// `e(U)`, maximised.
    InternalEdges,
}

impl Quantity {
    pub fn connectivity(self) -> Connectivity {
        match self {
            Quantity::VertexBoundary => Connectivity::Square,
            _ => Connectivity::G,
        }
    }

    pub fn minimised(self) -> bool {
        !matches!(self, Quantity::InternalEdges)
    }

    pub(crate) fn of(self, q: &SetQuantities) -> usize {
        match self {
            Quantity::EdgeBoundary => q.edge_boundary,
            Quantity::VertexBoundary => q.vertex_boundary,
            Quantity::InternalEdges => q.internal_edges,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetQuantities {
    pub size: usize,
    pub internal_edges: usize,
    pub edge_boundary: usize,
    pub vertex_boundary: usize,
}

/// Recomputes all quantities of `set` from scratch.
pub fn set_quantities(g: &Graph, set: &[u32]) -> SetQuantities {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v as usize] = true;
    }
    let mut outer = vec![false; g.n()];
    let (mut internal2, mut boundary, mut vertex_boundary) = (0, 0, 0);
    for &v in set {
        for &u in g.neighbors(v as usize) {
            if inside[u as usize] {
                internal2 += 1;
            } else {
                boundary += 1;
                if !outer[u as usize] {
                    outer[u as usize] = true;
                    vertex_boundary += 1;
                }
            }
        }
    }
    SetQuantities { size: set.len(), internal_edges: internal2 / 2, edge_boundary: boundary, vertex_boundary }
}

/// Incremental quantities of a growing and shrinking set.
pub(crate) struct Tracker<'g> {
    g: &'g Graph,
    /// Members adjacent to each vertex.
    adj: Vec<u32>,
    inside: Vec<bool>,
    size: usize,
    degree_sum: usize,
    internal: usize,
    outer: usize,
}

impl<'g> Tracker<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        Tracker {
            g,
            adj: vec![0; g.n()],
            inside: vec![false; g.n()],
            size: 0,
            degree_sum: 0,
            internal: 0,
            outer: 0,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, w: u32) {
        let w = w as usize;
        self.internal += self.adj[w] as usize;
        if self.adj[w] > 0 {
            self.outer -= 1;
        }
        self.inside[w] = true;
        self.size += 1;
        self.degree_sum += self.g.degree(w);
        for &u in self.g.neighbors(w) {
            let u = u as usize;
            self.adj[u] += 1;
            if self.adj[u] == 1 && !self.inside[u] {
                self.outer += 1;
            }
        }
    }

    #[inline]
    pub(crate) fn pop(&mut self, w: u32) {
        let w = w as usize;
        for &u in self.g.neighbors(w) {
            let u = u as usize;
            if self.adj[u] == 1 && !self.inside[u] {
                self.outer -= 1;
            }
            self.adj[u] -= 1;
        }
        self.inside[w] = false;
        self.size -= 1;
        self.degree_sum -= self.g.degree(w);
        if self.adj[w] > 0 {
            self.outer += 1;
        }
        self.internal -= self.adj[w] as usize;
    }

    #[inline]
    pub(crate) fn quantities(&self) -> SetQuantities {
        SetQuantities {
            size: self.size,
            internal_edges: self.internal,
            edge_boundary: self.degree_sum - 2 * self.internal,
            vertex_boundary: self.outer,
        }
    }

    pub(crate) fn degree_sum(&self) -> usize {
        self.degree_sum
    }
}

/// `a / sa` strictly better than `b / sb` for the given direction.
#[inline]
pub(crate) fn better(minimise: bool, a: usize, sa: usize, b: usize, sb: usize) -> bool {
    let (l, r) = (a as u128 * sb as u128, b as u128 * sa as u128);
    if minimise { l < r } else { l > r }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeExtremum {
    pub size: usize,
    /// Numerator of the extreme ratio.
    pub value: usize,
    pub ratio: f64,
    /// A set attaining it, ascending.
    pub witness: Vec<u32>,
    /// Connected sets of this size that were examined.
    pub sets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremaTable {
    pub quantity: Quantity,
    pub max_size: usize,
    /// Extremum over connected sets of each size `1..=max_size`; `None` if
    /// no connected set of that size exists.
    pub per_size: Vec<Option<SizeExtremum>>,
    pub visited: u64,
}

impl ExtremaTable {
    pub fn at(&self, size: usize) -> Option<&SizeExtremum> {
        self.per_size.get(size.checked_sub(1)?)?.as_ref()
    }

    /// Extremum over every set, connected or not, of size at most `size`.
    /// Ties go to the smaller size.
    pub fn up_to(&self, size: usize) -> Option<&SizeExtremum> {
        let minimise = self.quantity.minimised();
        let mut best: Option<&SizeExtremum> = None;
        for e in self.per_size.iter().take(size).flatten() {
            if best.is_none_or(|b| better(minimise, e.value, e.size, b.value, b.size)) {
                best = Some(e);
            }
        }
        best
    }
}

struct ExtremaVisitor<'g> {
    tracker: Tracker<'g>,
    quantity: Quantity,
    best: Vec<Option<(usize, Vec<u32>)>>,
    sets: Vec<u64>,
}

impl SetVisitor for ExtremaVisitor<'_> {
    fn enter(&mut self, set: &[u32], v: u32) -> bool {
        self.tracker.push(v);
        let s = set.len();
        let value = self.quantity.of(&self.tracker.quantities());
        self.sets[s - 1] += 1;
        let slot = &mut self.best[s - 1];
        let improves = match slot {
            None => true,
            Some((current, _)) => better(self.quantity.minimised(), value, s, *current, s),
        };
        if improves {
            let mut witness = set.to_vec();
            witness.sort_unstable();
            *slot = Some((value, witness));
        }
        true
    }

    fn leave(&mut self, v: u32) {
        self.tracker.pop(v);
    }
}

type AnchorResult = (Vec<Option<(usize, Vec<u32>)>>, Vec<u64>);

pub(crate) fn extrema(
    g: &Graph,
    max_size: usize,
    quantity: Quantity,
    budget: u64,
) -> Result<ExtremaTable, AuditError> {
    if max_size == 0 {
        return Err(AuditError::InvalidParameter("max_size must be at least 1".into()));
    }
    let square;
    let walk = match quantity.connectivity() {
        Connectivity::G => g,
        Connectivity::Square => {
            square = g.square();
            &square
        }
    };
    let (per_anchor, exhausted): (Vec<AnchorResult>, bool) = run_anchors(
        walk,
        max_size,
        budget,
        || ExtremaVisitor {
            tracker: Tracker::new(g),
            quantity,
            best: vec![None; max_size],
            sets: vec![0; max_size],
        },
        |v| (std::mem::replace(&mut v.best, vec![None; max_size]), std::mem::replace(&mut v.sets, vec![0; max_size])),
    );
    if exhausted {
        return Err(AuditError::BudgetExceeded { budget });
    }
    let minimise = quantity.minimised();
    let mut best: Vec<Option<(usize, Vec<u32>)>> = vec![None; max_size];
    let mut sets = vec![0u64; max_size];
    for (anchor_best, anchor_sets) in per_anchor {
        for (i, found) in anchor_best.into_iter().enumerate() {
            sets[i] += anchor_sets[i];
            if let Some((value, witness)) = found {
                let s = i + 1;
                if best[i].as_ref().is_none_or(|(cur, _)| better(minimise, value, s, *cur, s)) {
                    best[i] = Some((value, witness));
                }
            }
        }
    }
    let visited = sets.iter().sum();
    let per_size = best
        .into_iter()
        .enumerate()
        .map(|(i, found)| {
            found.map(|(value, witness)| SizeExtremum {
                size: i + 1,
                value,
                ratio: value as f64 / (i + 1) as f64,
                witness,
                sets: sets[i],
            })
        })
        .collect();
    Ok(ExtremaTable { quantity, max_size, per_size, visited })
}

/// Minimum of `e(U, U^c) / |U|` per size.
pub fn min_edge_expansion(g: &Graph, max_size: usize, budget: u64) -> Result<ExtremaTable, AuditError> {
    extrema(g, max_size, Quantity::EdgeBoundary, budget)
}

/// Minimum of `|N(U)| / |U|` per size.
pub fn min_vertex_expansion(g: &Graph, max_size: usize, budget: u64) -> Result<ExtremaTable, AuditError> {
    extrema(g, max_size, Quantity::VertexBoundary, budget)
}

/// Maximum of `e(U) / |U|` per size.
pub fn local_sparsity_max(g: &Graph, max_size: usize, budget: u64) -> Result<ExtremaTable, AuditError> {
    extrema(g, max_size, Quantity::InternalEdges, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::DEFAULT_BUDGET;
    use crate::graph::{gen_complete, gen_cycle, gen_hypercube};

    #[test]
    fn cycle_values() {
        let c8 = gen_cycle(8).unwrap();
        let e = min_edge_expansion(&c8, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.at(4).unwrap().value, 2);
        assert_eq!(e.at(4).unwrap().ratio, 0.5);
        assert_eq!(e.at(4).unwrap().witness.len(), 4);
        let v = min_vertex_expansion(&c8, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.up_to(2).unwrap().ratio, 1.0);
        let s = local_sparsity_max(&c8, 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.up_to(8).unwrap().ratio, 1.0);
        assert_eq!(s.at(7).unwrap().value, 6);
    }

    #[test]
    fn complete_graph_values() {
        let k4 = gen_complete(4);
        assert_eq!(min_edge_expansion(&k4, 2, DEFAULT_BUDGET).unwrap().up_to(2).unwrap().ratio, 2.0);
        assert_eq!(local_sparsity_max(&k4, 4, DEFAULT_BUDGET).unwrap().up_to(4).unwrap().ratio, 1.5);
    }

    #[test]
    fn cube_pairs() {
        let q3 = gen_hypercube(3).unwrap();
        let v = min_vertex_expansion(&q3, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.at(1).unwrap().ratio, 3.0);
        assert_eq!(v.up_to(2).unwrap().ratio, 2.0);
        assert_eq!(v.at(2).unwrap().value, 4);
    }

    #[test]
    fn singletons_of_regular_graphs() {
        let q = gen_hypercube(5).unwrap();
        assert_eq!(min_edge_expansion(&q, 1, DEFAULT_BUDGET).unwrap().at(1).unwrap().ratio, 5.0);
        assert_eq!(min_vertex_expansion(&q, 1, DEFAULT_BUDGET).unwrap().at(1).unwrap().ratio, 5.0);
    }

    #[test]
    fn tree_density_stays_below_one() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        let t = local_sparsity_max(&g, 7, DEFAULT_BUDGET).unwrap();
        for k in 1..=7 {
            assert_eq!(t.at(k).unwrap().value, k - 1);
        }
    }

    #[test]
    fn witnesses_recompute() {
        let q = gen_hypercube(4).unwrap();
        for quantity in [Quantity::EdgeBoundary, Quantity::VertexBoundary, Quantity::InternalEdges] {
            let t = extrema(&q, 5, quantity, DEFAULT_BUDGET).unwrap();
            for e in t.per_size.iter().flatten() {
                assert_eq!(quantity.of(&set_quantities(&q, &e.witness)), e.value);
            }
        }
    }

    #[test]
    fn tracker_matches_recomputation() {
        let g = gen_hypercube(4).unwrap();
        let mut t = Tracker::new(&g);
        let order = [0u32, 1, 3, 7, 15, 5, 9];
        for (i, &v) in order.iter().enumerate() {
            t.push(v);
            assert_eq!(t.quantities(), set_quantities(&g, &order[..=i]));
        }
        for i in (0..order.len()).rev() {
            t.pop(order[i]);
            assert_eq!(t.quantities(), set_quantities(&g, &order[..i]));
        }
    }
}
