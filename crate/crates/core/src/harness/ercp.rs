use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::Seeds;
use super::{host_degree, ExperimentConfig, GraphSpec, HarnessError, ResolvedThresholds};
use crate::graph::Graph;
use crate::gw::site_survival_x;
use crate::percolation::{lemma24_violations, two_round_exposure, ExposureParams};
use crate::seed::derive_seed;

/// Number of trials between partial reports.
const CHUNK: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    #[serde(rename = "L1")]
    pub l1: usize,
    #[serde(rename = "L2")]
    pub l2: usize,
    /// Components other than the largest with size inside the gap window.
    pub gap_count: usize,
    pub w1_merged: bool,
    pub lemma24_violations: usize,
    pub retained: usize,
    pub w1_components: usize,
    pub new_large_outside_w1: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    #[serde(rename = "mean_L1_frac")]
    pub mean_l1_frac: Option<f64>,
    /// Standard error of the mean, `sd / sqrt(trials)`.
    pub stderr: Option<f64>,
    pub ci_method: String,
    /// `mean +- 1.96 stderr`.
    pub ci95: Option<(f64, f64)>,
    pub x_predicted: f64,
    #[serde(rename = "median_L2")]
    pub median_l2: Option<f64>,
    pub merge_rate: Option<f64>,
    pub total_gap_count: usize,
    pub total_lemma24_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErcpReport {
    pub config: ExperimentConfig,
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub thresholds: ResolvedThresholds,
    pub complete: bool,
    pub trials: Vec<TrialRow>,
    pub aggregate: Aggregate,
    /// `(size, count)` over all components of all trials, by size.
    pub histogram: Vec<(usize, usize)>,
    pub seeds: Seeds,
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

pub(crate) fn aggregate(rows: &[TrialRow], n: usize, x_predicted: f64) -> Aggregate {
    let fracs: Vec<f64> = rows.iter().map(|r| r.l1 as f64 / n as f64).collect();
    let mean_l1_frac = mean(&fracs);
    let stderr = mean_l1_frac.map(|m| {
        if fracs.len() < 2 {
            return 0.0;
        }
        let var = fracs.iter().map(|f| (f - m) * (f - m)).sum::<f64>() / (fracs.len() - 1) as f64;
        (var / fracs.len() as f64).sqrt()
    });
    let l2: Vec<f64> = rows.iter().map(|r| r.l2 as f64).collect();
    let merged: Vec<f64> = rows.iter().map(|r| if r.w1_merged { 1.0 } else { 0.0 }).collect();
    Aggregate {
        mean_l1_frac,
        stderr,
        ci_method: "normal-approximation".into(),
        ci95: mean_l1_frac.zip(stderr).map(|(m, s)| (m - 1.96 * s, m + 1.96 * s)),
        x_predicted,
        median_l2: median(&l2),
        merge_rate: mean(&merged),
        total_gap_count: rows.iter().map(|r| r.gap_count).sum(),
        total_lemma24_violations: rows.iter().map(|r| r.lemma24_violations).sum(),
    }
}

fn run_trial(
    g: &Graph,
    d: usize,
    params: &ExposureParams,
    thresholds: &ResolvedThresholds,
    master: u64,
    trial: usize,
) -> Result<(TrialRow, Vec<(usize, usize)>), HarnessError> {
    let exposure = two_round_exposure(g, params, derive_seed(master, trial as u64))?;
    let stats = &exposure.g2_stats;
    let gap_count = stats
        .sizes
        .iter()
        .skip(1)
        .filter(|&&s| (s as f64) >= thresholds.gap_lo && (s as f64) <= thresholds.gap_hi)
        .count();
    let row = TrialRow {
        trial,
        l1: stats.l1,
        l2: stats.l2,
        gap_count,
        w1_merged: exposure.w1_merged,
        lemma24_violations: lemma24_violations(g, stats, d),
        retained: stats.retained.count(),
        w1_components: exposure.w1_components,
        new_large_outside_w1: exposure.new_large_outside_w1,
    };
    Ok((row, stats.size_histogram()))
}

fn merge_histogram(total: &mut Vec<(usize, usize)>, part: &[(usize, usize)]) {
    let mut merged = Vec::with_capacity(total.len() + part.len());
    let (mut i, mut j) = (0, 0);
    while i < total.len() || j < part.len() {
        match (total.get(i), part.get(j)) {
            (Some(&a), Some(&b)) if a.0 == b.0 => {
                merged.push((a.0, a.1 + b.1));
                i += 1;
                j += 1;
            }
            (Some(&a), Some(&b)) if a.0 < b.0 => {
                merged.push(a);
                i += 1;
            }
            (Some(&a), None) => {
                merged.push(a);
                i += 1;
            }
            (_, Some(&b)) => {
                merged.push(b);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *total = merged;
}

/// Runs the ERCP trials on a prebuilt host graph.
pub(crate) fn run_ercp_on(
    config: &ExperimentConfig,
    g: &Graph,
    mut progress: impl FnMut(&ErcpReport),
) -> Result<ErcpReport, HarnessError> {
    config.validate()?;
    let n = g.n();
    let d = host_degree(g)?;
    let p = config.retention(d);
    let thresholds = config.resolve_thresholds(n, d)?;
    let params = ExposureParams {
        p,
        s: config.s,
        denominator: config.sprinkle_denominator(d),
        threshold: thresholds.w_cutoff,
        large_cutoff: thresholds.large_cutoff,
    };
    let x_predicted = site_survival_x(d, p)?;
    let mut report = ErcpReport {
        config: config.clone(),
        n,
        d,
        p,
        thresholds,
        complete: false,
        trials: Vec::with_capacity(config.trials),
        aggregate: aggregate(&[], n, x_predicted),
        histogram: Vec::new(),
        seeds: Seeds::new(config.master_seed),
    };
    let mut start = 0;
    while start < config.trials {
        let end = (start + CHUNK).min(config.trials);
        let chunk: Vec<_> = (start..end)
            .into_par_iter()
            .map(|t| run_trial(g, d, &params, &thresholds, config.master_seed, t))
            .collect::<Result<_, _>>()?;
        for (row, hist) in chunk {
            report.trials.push(row);
            merge_histogram(&mut report.histogram, &hist);
        }
        start = end;
        report.complete = start == config.trials;
        report.aggregate = aggregate(&report.trials, n, x_predicted);
        progress(&report);
    }
    Ok(report)
}

/// As [`run_ercp`], handing every partial report to `progress` (the last
/// call carries the complete one).
pub fn run_ercp_with(config: &ExperimentConfig, progress: impl FnMut(&ErcpReport)) -> Result<ErcpReport, HarnessError> {
    config.validate()?;
    let g = config.graph.build()?;
    run_ercp_on(config, &g, progress)
}

/// Site percolation trials with two-round exposure on the configured host.
pub fn run_ercp(config: &ExperimentConfig) -> Result<ErcpReport, HarnessError> {
    run_ercp_with(config, |_| {})
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub graph: GraphSpec,
    pub n: usize,
    pub d: usize,
    pub p: f64,
    #[serde(rename = "median_L2")]
    pub median_l2: f64,
    #[serde(rename = "mean_L1_frac")]
    pub mean_l1_frac: f64,
    pub ci95: (f64, f64),
    pub x_predicted: f64,
    /// `median_L2 / ln n`.
    pub l2_over_ln_n: f64,
    pub merge_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub config: ExperimentConfig,
    pub points: Vec<ScalingPoint>,
    /// `l2_over_ln_n` at the largest size over its value at the smallest.
    pub ratio_last_over_first: Option<f64>,
    pub seeds: Seeds,
}

/// One ERCP run per host in `sequence`, which must be strictly increasing
/// in `n`. Every host reuses the master seed of `config`.
pub fn run_scaling(config: &ExperimentConfig, sequence: &[GraphSpec]) -> Result<ScalingReport, HarnessError> {
    config.validate()?;
    if sequence.len() < 3 {
        return Err(HarnessError::Config(format!("scaling needs at least 3 sizes, got {}", sequence.len())));
    }
    let mut points = Vec::with_capacity(sequence.len());
    for spec in sequence {
        let g = spec.build()?;
        if let Some(prev) = points.last().map(|p: &ScalingPoint| p.n) {
            if g.n() <= prev {
                return Err(HarnessError::Config("scaling sizes must be strictly increasing".into()));
            }
        }
        let mut cfg = config.clone();
        cfg.graph = spec.clone();
        let r = run_ercp_on(&cfg, &g, |_| {})?;
        let a = &r.aggregate;
        let median_l2 = a.median_l2.unwrap_or(0.0);
        points.push(ScalingPoint {
            graph: spec.clone(),
            n: r.n,
            d: r.d,
            p: r.p,
            median_l2,
            mean_l1_frac: a.mean_l1_frac.unwrap_or(0.0),
            ci95: a.ci95.unwrap_or((0.0, 0.0)),
            x_predicted: a.x_predicted,
            l2_over_ln_n: median_l2 / (r.n as f64).ln(),
            merge_rate: a.merge_rate.unwrap_or(0.0),
        });
    }
    let first = points.first().map(|p| p.l2_over_ln_n).unwrap_or(0.0);
    let last = points.last().map(|p| p.l2_over_ln_n).unwrap_or(0.0);
    Ok(ScalingReport {
        config: config.clone(),
        points,
        ratio_last_over_first: (first > 0.0).then(|| last / first),
        seeds: Seeds::new(config.master_seed),
    })
}
