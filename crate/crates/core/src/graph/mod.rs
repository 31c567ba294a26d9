//! Immutable simple undirected graphs and the generators used as percolation hosts.

mod counterexample;
mod generators;
mod io;
mod partition;

use thiserror::Error;

use crate::error::ErrorKind;

pub use counterexample::{
    default_cluster_size, gen_counterexample, ClusterStrategy, Counterexample, CounterexampleParams,
};
pub use generators::{
    gen_complete, gen_cycle, gen_hypercube, gen_random_regular, PairingRule, RandomRegularOptions,
};
pub use io::{read_edge_list, write_edge_list, parse_edge_list, format_edge_list};
pub use partition::{equitable_partition, PartitionOptions, VertexPartition};

/// Dense vertex label in `[0, n)`.
pub type Vertex = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("hypercube dimension {d} outside 1..=30")]
    DimensionTooLarge { d: usize },
    #[error("no {d}-regular graph on {n} vertices: n*d is odd")]
    ParityViolation { n: usize, d: usize },
    #[error("degree {d} must be smaller than the vertex count {n}")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("random regular sampler gave up after {attempts} restarts")]
    RestartBudgetExceeded { attempts: usize },
    #[error("class size {class_size} does not divide {n}")]
    NotDivisible { n: usize, class_size: usize },
    #[error("{classes} classes of size {class_size} cannot be independent: max degree {max_degree}")]
    TooFewClasses { classes: usize, class_size: usize, max_degree: usize },
    #[error("equitable partition repair budget exhausted while placing vertex {vertex}")]
    RepairBudgetExceeded { vertex: usize },
    #[error("parameter conflict: {0}")]
    ParameterConflict(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GraphError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            GraphError::RestartBudgetExceeded { .. }
            | GraphError::RepairBudgetExceeded { .. }
            | GraphError::Io(_) => ErrorKind::Runtime,
            _ => ErrorKind::Validation,
        }
    }
}

/// Undirected simple graph in compressed sparse row layout.
///
/// Neighbour lists are strictly increasing, symmetric and loop-free. The
/// structure is immutable once built and can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edge_count: usize,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    regular_degree: Option<usize>,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    ///
    /// `(u, v)` and `(v, u)` describe the same edge; listing both is a
    /// duplicate.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for &deg in &degree {
            offsets.push(offsets.last().unwrap() + deg);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0 as Vertex; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v as Vertex;
            fill[u] += 1;
            targets[fill[v]] = u as Vertex;
            fill[v] += 1;
        }
        for v in 0..n {
            let list = &mut targets[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v.min(w[0] as usize), v.max(w[0] as usize));
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
        }
        Ok(Self::from_parts(n, offsets, targets))
    }

    /// Assembles a graph from CSR arrays whose lists are already sorted,
    /// symmetric and simple.
    pub(crate) fn from_parts(n: usize, offsets: Vec<usize>, targets: Vec<Vertex>) -> Self {
        debug_assert_eq!(offsets.len(), n + 1);
        let edge_count = targets.len() / 2;
        let regular_degree = if n == 0 {
            None
        } else {
            let d0 = offsets[1] - offsets[0];
            (0..n)
                .all(|v| offsets[v + 1] - offsets[v] == d0)
                .then_some(d0)
        };
        Graph { n, edge_count, offsets, targets, regular_degree }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Common degree when every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&(v as Vertex)).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Graph on the same vertices joining pairs at distance one or two.
    pub fn square(&self) -> Graph {
        let mut mark = vec![usize::MAX; self.n];
        let mut offsets = Vec::with_capacity(self.n + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut scratch = Vec::new();
        for v in 0..self.n {
            scratch.clear();
            mark[v] = v;
            for &u in self.neighbors(v) {
                if mark[u as usize] != v {
                    mark[u as usize] = v;
                    scratch.push(u);
                }
                for &w in self.neighbors(u as usize) {
                    if mark[w as usize] != v {
                        mark[w as usize] = v;
                        scratch.push(w);
                    }
                }
            }
            scratch.sort_unstable();
            targets.extend_from_slice(&scratch);
            offsets.push(targets.len());
        }
        Graph::from_parts(self.n, offsets, targets)
    }

    /// Re-checks every structural invariant; used on foreign input.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut degree_sum = 0;
        for v in 0..self.n {
            let list = self.neighbors(v);
            degree_sum += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::InvariantViolation(format!(
                        "neighbour list of {v} not strictly increasing"
                    )));
                }
            }
            for &u in list {
                if u as usize == v {
                    return Err(GraphError::SelfLoop { vertex: v });
                }
                if !self.has_edge(u as usize, v) {
                    return Err(GraphError::InvariantViolation(format!(
                        "edge {{{v}, {u}}} is not symmetric"
                    )));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(GraphError::InvariantViolation("degree sum mismatch".into()));
        }
        if let Some(d) = self.regular_degree {
            if (0..self.n).any(|v| self.degree(v) != d) {
                return Err(GraphError::InvariantViolation("irregular vertex".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_three_vertices() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.regular_degree(), None);
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.validate().unwrap();
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 0)]),
            Err(GraphError::SelfLoop { vertex: 0 })
        ));
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::OutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        ));
    }

    #[test]
    fn complete_graph_on_four_is_cubic() {
        let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let g = Graph::from_edges(4, &edges).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.edges().collect::<Vec<_>>(), edges);
    }

    #[test]
    fn square_of_a_path() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let sq = g.square();
        assert_eq!(sq.neighbors(0), &[1, 2]);
        assert_eq!(sq.neighbors(1), &[0, 2, 3]);
        sq.validate().unwrap();
    }
}
