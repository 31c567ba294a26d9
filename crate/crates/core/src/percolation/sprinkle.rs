//! Two-round exposure: a first round at `p1` followed by a sprinkle at `p2`
//! with `(1 - p1)(1 - p2) = 1 - p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{components, sample_bernoulli, ComponentStats, PercolationError, VertexSubset};
use crate::graph::Graph;
use crate::gw::sprinkle_split;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposureParams {
    pub p: f64,
    pub s: f64,
    /// Denominator of `p2 = s / denominator`, normally the degree.
    pub denominator: f64,
    /// First-round components of at least this size form `W1`.
    pub threshold: f64,
    /// Second-round components of at least this size count as large.
    pub large_cutoff: f64,
}

#[derive(Debug, Clone)]
pub struct SprinklingReport {
    pub p: f64,
    pub s: f64,
    pub p1: f64,
    pub p2: f64,
    pub threshold: f64,
    pub large_cutoff: f64,
    pub g1_stats: ComponentStats,
    pub g2_stats: ComponentStats,
    pub w1: VertexSubset,
    /// Number of first-round components that make up `W1`.
    pub w1_components: usize,
    /// `W1` is non-empty and lies inside a single second-round component.
    pub w1_merged: bool,
    /// Large second-round components that avoid `W1` entirely.
    pub new_large_outside_w1: usize,
}

/// Samples `V_p1`, then adds every other vertex with probability `p2`; the
/// union has the law of `V_p`.
pub fn two_round_exposure(
    g: &Graph,
    params: &ExposureParams,
    seed: u64,
) -> Result<SprinklingReport, PercolationError> {
    let ExposureParams { p, s, denominator, threshold, large_cutoff } = *params;
    if !(threshold > 0.0) || !(large_cutoff > 0.0) {
        return Err(PercolationError::InvalidParameter(format!(
            "threshold {threshold} and large cutoff {large_cutoff} must be positive"
        )));
    }
    let split = sprinkle_split(p, s, denominator)?;
    let n = g.n();
    let first = sample_bernoulli(n, split.p1, &mut ChaCha8Rng::seed_from_u64(derive_seed(seed, 0)));
    let mut second = first.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    for v in 0..n {
        // one draw per vertex keeps the stream aligned whatever the first round did
        let hit = rng.gen_bool(split.p2);
        if hit && !first.contains(v) {
            second.insert(v);
        }
    }
    let g1_stats = components(g, &first)?;
    let g2_stats = components(g, &second)?;

    let mut w1 = VertexSubset::empty(n);
    let mut w1_components = 0;
    for (id, &size) in g1_stats.sizes.iter().enumerate() {
        if size as f64 >= threshold {
            w1_components += 1;
        } else {
            // sizes are sorted, nothing further qualifies
            debug_assert!(g1_stats.sizes[id..].iter().all(|&s| (s as f64) < threshold));
            break;
        }
    }
    let mut touched = vec![false; g2_stats.num_components()];
    for v in first.iter() {
        if (g1_stats.component_of[v] as usize) < w1_components {
            w1.insert(v);
            touched[g2_stats.component_of[v] as usize] = true;
        }
    }
    let hosts = touched.iter().filter(|&&t| t).count();
    let new_large_outside_w1 = g2_stats
        .sizes
        .iter()
        .zip(&touched)
        .filter(|&(&size, &t)| size as f64 >= large_cutoff && !t)
        .count();
    Ok(SprinklingReport {
        p,
        s,
        p1: split.p1,
        p2: split.p2,
        threshold,
        large_cutoff,
        g1_stats,
        g2_stats,
        w1,
        w1_components,
        w1_merged: hosts == 1,
        new_large_outside_w1,
    })
}

/// Components larger than `300 ln n` whose outer neighbourhood is smaller
/// than `(9/10) d |S|`.
pub fn lemma24_violations(g: &Graph, stats: &ComponentStats, d: usize) -> usize {
    let n = g.n();
    let floor = 300.0 * (n as f64).ln();
    let big = stats.sizes.iter().take_while(|&&s| s as f64 > floor).count();
    if big == 0 {
        return 0;
    }
    let mut violations = 0;
    let mut stamp = vec![u32::MAX; n];
    let members = stats.members();
    for (id, comp) in members.iter().take(big).enumerate() {
        let mut outer = 0usize;
        for &u in comp {
            for &w in g.neighbors(u as usize) {
                let w = w as usize;
                if stats.component_of[w] != id as u32 && stamp[w] != id as u32 {
                    stamp[w] = id as u32;
                    outer += 1;
                }
            }
        }
        if (outer as f64) < 0.9 * d as f64 * comp.len() as f64 {
            violations += 1;
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_hypercube};

    fn params(p: f64, s: f64, d: f64, threshold: f64) -> ExposureParams {
        ExposureParams { p, s, denominator: d, threshold, large_cutoff: threshold }
    }

    #[test]
    fn no_sprinkle_means_one_round() {
        let g = gen_hypercube(8).unwrap();
        for seed in 0..20 {
            let r = two_round_exposure(&g, &params(0.3, 0.0, 8.0, 5.0), seed).unwrap();
            assert_eq!(r.g1_stats, r.g2_stats);
            assert_eq!(r.w1_merged, r.w1_components == 1);
            assert_eq!(r.new_large_outside_w1, 0);
        }
    }

    #[test]
    fn rounds_refine() {
        let g = gen_hypercube(9).unwrap();
        for seed in 0..30 {
            let r = two_round_exposure(&g, &params(0.2, 0.5, 9.0, 10.0), seed).unwrap();
            assert!(r.g1_stats.retained.is_subset(&r.g2_stats.retained));
            // every first-round component maps into exactly one second-round component
            let mut host = vec![u32::MAX; r.g1_stats.num_components()];
            for v in r.g1_stats.retained.iter() {
                let c1 = r.g1_stats.component_of[v] as usize;
                let c2 = r.g2_stats.component_of[v];
                assert!(host[c1] == u32::MAX || host[c1] == c2);
                host[c1] = c2;
            }
            assert!(r.w1.is_subset(&r.g1_stats.retained));
        }
    }

    #[test]
    fn union_has_the_law_of_v_p() {
        let g = gen_complete(20);
        let p = 0.35;
        let trials = 10_000;
        let mut hits = vec![0usize; 20];
        for seed in 0..trials {
            let r = two_round_exposure(&g, &params(p, 1.0, 19.0, 1.0), seed).unwrap();
            for v in r.g2_stats.retained.iter() {
                hits[v] += 1;
            }
        }
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for (v, &h) in hits.iter().enumerate() {
            assert!((h as f64 - trials as f64 * p).abs() <= 3.0 * sigma, "vertex {v}: {h}");
        }
    }

    #[test]
    fn rejects_oversized_sprinkle() {
        let g = gen_complete(5);
        assert!(matches!(
            two_round_exposure(&g, &params(0.1, 2.0, 4.0, 1.0), 0),
            Err(PercolationError::Gw(_))
        ));
        assert!(two_round_exposure(&g, &params(0.5, 1.0, 4.0, 0.0), 0).is_err());
    }

    #[test]
    fn small_set_check_on_tiny_graphs_is_vacuous() {
        let g = gen_hypercube(6).unwrap();
        let stats = components(&g, &VertexSubset::full(64)).unwrap();
        // 300 ln 64 exceeds the vertex count
        assert_eq!(lemma24_violations(&g, &stats, 6), 0);
    }
}
