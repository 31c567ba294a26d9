use percolab::graph::gen_hypercube;
use percolab::percolation::{two_round_exposure, ExposureParams};

/// Fixed-seed baseline on Q14 with the first-round cutoff scaled to
/// `0.03 * (100 / eps^2) ln n`.
#[test]
fn first_round_giants_merge_on_q14() {
    let g = gen_hypercube(14).unwrap();
    let eps = 0.5;
    let threshold = 0.03 * 100.0 / (eps * eps) * (g.n() as f64).ln();
    let params = ExposureParams { p: 1.5 / 14.0, s: 0.1, denominator: 14.0, threshold, large_cutoff: threshold };
    let merged = (0..50u64).filter(|&seed| two_round_exposure(&g, &params, seed).unwrap().w1_merged).count();
    assert!(merged >= 45, "W1 merged in {merged} of 50 seeds");
}
