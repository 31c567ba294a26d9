use serde::{Deserialize, Serialize};

use super::generators::gen_random_regular_multipartite;
use super::{
    equitable_partition, gen_random_regular, Graph, GraphError, PartitionOptions,
    RandomRegularOptions, Vertex, VertexPartition,
};
use crate::seed::derive_seed;

/// How the sparse global layer and its clusters are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterStrategy {
    /// Sample the global layer first, then colour it equitably.
    ColorRandomH1,
    /// Fix contiguous clusters first, then sample the global layer among
    /// pairs in distinct clusters.
    PartitionFirst,
    /// `ColorRandomH1`, falling back to `PartitionFirst` when the colouring
    /// fails (too few classes for the global degree).
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub n: usize,
    pub d: usize,
    pub b: usize,
    /// Cluster size; `None` picks [`default_cluster_size`].
    pub k: Option<usize>,
    pub seed: u64,
    pub strategy: ClusterStrategy,
}

/// The clustered graph together with its construction layers.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub graph: Graph,
    /// The `10b`-regular spanning layer.
    pub h1: Graph,
    /// Clusters; each is independent in `h1` and carries one dense copy.
    pub partition: VertexPartition,
    pub cluster_size: usize,
    pub strategy_used: ClusterStrategy,
}

/// `round(d^2 ln n)` moved to the nearest divisor of `n` (smaller one on ties).
pub fn default_cluster_size(n: usize, d: usize) -> usize {
    let target = ((d * d) as f64 * (n as f64).ln()).round().max(1.0);
    (1..=n)
        .filter(|k| n % k == 0)
        .min_by(|&a, &b| {
            let da = (a as f64 - target).abs();
            let db = (b as f64 - target).abs();
            da.total_cmp(&db).then(a.cmp(&b))
        })
        .unwrap_or(1)
}

/// Builds the `d`-regular clustered graph: a random `10b`-regular layer
/// whose vertex set is split into independent clusters of size `k`, plus an
/// independent random `(d - 10b)`-regular graph on each cluster, embedded in
/// index order.
pub fn gen_counterexample(params: &CounterexampleParams) -> Result<Counterexample, GraphError> {
    let CounterexampleParams { n, d, b, seed, .. } = *params;
    let conflict = |msg: String| Err(GraphError::ParameterConflict(msg));
    if b < 2 {
        return conflict(format!("expansion constant b = {b} must be at least 2"));
    }
    if d % 2 == 1 {
        return conflict(format!("degree d = {d} must be even"));
    }
    let global_degree = 10 * b;
    if global_degree >= d {
        return conflict(format!("10b = {global_degree} must be below d = {d}"));
    }
    let k = params.k.unwrap_or_else(|| default_cluster_size(n, d));
    if k == 0 || n % k != 0 {
        return conflict(format!("cluster size {k} does not divide n = {n}"));
    }
    let local_degree = d - global_degree;
    if (k * local_degree) % 2 == 1 {
        return conflict(format!("k (d - 10b) = {k} * {local_degree} is odd"));
    }
    if local_degree >= k {
        return conflict(format!("cluster degree {local_degree} needs clusters larger than k = {k}"));
    }

    let h1_seed = derive_seed(seed, 0);
    let colour_seed = derive_seed(seed, 1);
    let (h1, partition, strategy_used) = match params.strategy {
        ClusterStrategy::PartitionFirst => partition_first(n, k, global_degree, h1_seed)?,
        ClusterStrategy::ColorRandomH1 => colour_random(n, k, global_degree, h1_seed, colour_seed)?,
        ClusterStrategy::Auto => match colour_random(n, k, global_degree, h1_seed, colour_seed) {
            Ok(found) => found,
            Err(GraphError::TooFewClasses { .. } | GraphError::RepairBudgetExceeded { .. }) => {
                partition_first(n, k, global_degree, h1_seed)?
            }
            Err(other) => return Err(other),
        },
    };

    let mut adjacency: Vec<Vec<Vertex>> =
        (0..n).map(|v| h1.neighbors(v).to_vec()).collect();
    for (i, class) in partition.classes.iter().enumerate() {
        let h2 = gen_random_regular(
            k,
            local_degree,
            derive_seed(seed, 2 + i as u64),
            RandomRegularOptions::default(),
        )?;
        for (a, b) in h2.edges() {
            let (u, v) = (class[a], class[b]);
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(n * d);
    offsets.push(0);
    for list in &mut adjacency {
        list.sort_unstable();
        targets.extend_from_slice(list);
        offsets.push(targets.len());
    }
    let graph = Graph::from_parts(n, offsets, targets);
    debug_assert_eq!(graph.regular_degree(), Some(d));
    Ok(Counterexample { graph, h1, partition, cluster_size: k, strategy_used })
}

fn colour_random(
    n: usize,
    k: usize,
    degree: usize,
    h1_seed: u64,
    colour_seed: u64,
) -> Result<(Graph, VertexPartition, ClusterStrategy), GraphError> {
    let h1 = gen_random_regular(n, degree, h1_seed, RandomRegularOptions::default())?;
    let partition = equitable_partition(&h1, k, colour_seed, PartitionOptions::default())?;
    Ok((h1, partition, ClusterStrategy::ColorRandomH1))
}

fn partition_first(
    n: usize,
    k: usize,
    degree: usize,
    h1_seed: u64,
) -> Result<(Graph, VertexPartition, ClusterStrategy), GraphError> {
    if degree > n - k {
        return Err(GraphError::ParameterConflict(format!(
            "a {degree}-regular layer cannot avoid clusters of size {k} on {n} vertices"
        )));
    }
    let partition = VertexPartition::contiguous(n, k)?;
    let h1 = gen_random_regular_multipartite(&partition.class_of, degree, h1_seed, 10_000)?;
    Ok((h1, partition, ClusterStrategy::PartitionFirst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, d: usize, b: usize, k: usize, seed: u64) -> CounterexampleParams {
        CounterexampleParams { n, d, b, k: Some(k), seed, strategy: ClusterStrategy::Auto }
    }

    fn check(ce: &Counterexample, d: usize, b: usize) {
        let n = ce.graph.n();
        ce.graph.validate().unwrap();
        assert_eq!(ce.graph.regular_degree(), Some(d));
        assert_eq!(ce.h1.regular_degree(), Some(10 * b));
        ce.partition.validate(n).unwrap();
        assert!(ce.partition.is_independent_in(&ce.h1));
        // edges(G) = edges(H1) + one (d - 10b)-regular graph per cluster, disjointly
        let mut cluster_edges = 0;
        for (u, v) in ce.graph.edges() {
            let same = ce.partition.class_of[u] == ce.partition.class_of[v];
            assert_eq!(same, !ce.h1.has_edge(u, v));
            cluster_edges += same as usize;
        }
        assert_eq!(cluster_edges + ce.h1.edge_count(), ce.graph.edge_count());
        for class in &ce.partition.classes {
            for &v in class {
                let inside = ce.graph.neighbors(v as usize).iter()
                    .filter(|&&u| ce.partition.class_of[u as usize] == ce.partition.class_of[v as usize])
                    .count();
                assert_eq!(inside, d - 10 * b);
            }
        }
    }

    #[test]
    fn small_instance_is_regular_and_clustered() {
        let ce = gen_counterexample(&params(40, 24, 2, 10, 3)).unwrap();
        check(&ce, 24, 2);
        assert_eq!(ce.partition.num_classes(), 4);
        // four 20-regular-compatible classes of ten cannot come from colouring
        assert_eq!(ce.strategy_used, ClusterStrategy::PartitionFirst);
    }

    #[test]
    fn roomy_instance_uses_colouring() {
        let ce = gen_counterexample(&params(1200, 30, 2, 40, 5)).unwrap();
        check(&ce, 30, 2);
        assert_eq!(ce.strategy_used, ClusterStrategy::ColorRandomH1);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = gen_counterexample(&params(40, 24, 2, 10, 9)).unwrap();
        let b = gen_counterexample(&params(40, 24, 2, 10, 9)).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.partition, b.partition);
    }

    #[test]
    fn rejects_conflicting_parameters() {
        for bad in [
            params(40, 23, 2, 10, 0),
            params(40, 24, 1, 10, 0),
            params(40, 20, 2, 10, 0),
            params(40, 24, 2, 7, 0),
        ] {
            assert!(matches!(gen_counterexample(&bad), Err(GraphError::ParameterConflict(_))));
        }
    }

    #[test]
    fn default_cluster_size_is_a_divisor_near_target() {
        // d^2 ln n = 576 * ln 40 = 2124.8, largest divisor of 40 is 40
        assert_eq!(default_cluster_size(40, 24), 40);
        // 4 * ln 1000 = 27.6 -> nearest divisor of 1000 is 25
        assert_eq!(default_cluster_size(1000, 2), 25);
    }
}
