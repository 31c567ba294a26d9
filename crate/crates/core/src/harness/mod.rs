//! Seeded Monte Carlo experiments and their persisted reports.
//!
//! Trial `i` of a run with master seed `m` draws all of its randomness from
//! `derive_seed(m, i)`, so trials can run in any order on any number of
//! workers and still aggregate to the same report.

mod counterexample;
mod ercp;
mod report;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::AuditError;
use crate::error::ErrorKind;
use crate::graph::{
    gen_complete, gen_counterexample, gen_cycle, gen_hypercube, gen_random_regular, read_edge_list,
    ClusterStrategy, CounterexampleParams, Graph, GraphError, RandomRegularOptions,
};
use crate::gw::{small_component_threshold, DegreeMode, GwError, ThresholdMode};
use crate::percolation::PercolationError;

pub use counterexample::{
    construction_alpha, run_counterexample, CounterexampleReport, CounterexampleTrial, StructuralAudit,
};
pub use ercp::{run_ercp, run_ercp_with, run_scaling, Aggregate, ErcpReport, ScalingPoint, ScalingReport, TrialRow};
pub use report::{read_report, write_histogram, write_report, Seeds};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error(transparent)]
    Audit(#[from] AuditError),
}

impl HarnessError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            HarnessError::Config(_) => ErrorKind::Validation,
            HarnessError::Io { .. } | HarnessError::Json(_) => ErrorKind::Runtime,
            HarnessError::Graph(e) => e.kind(),
            HarnessError::Gw(e) => e.kind(),
            HarnessError::Percolation(e) => e.kind(),
            HarnessError::Audit(e) => e.kind(),
        }
    }
}

/// Host graph of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphSpec {
    Hypercube { d: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    Counterexample { n: usize, d: usize, b: usize, k: Option<usize>, seed: u64 },
    Complete { n: usize },
    Cycle { n: usize },
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, HarnessError> {
        Ok(match self {
            GraphSpec::Hypercube { d } => gen_hypercube(*d)?,
            GraphSpec::RandomRegular { n, d, seed } => {
                gen_random_regular(*n, *d, *seed, RandomRegularOptions::default())?
            }
            GraphSpec::Counterexample { .. } => gen_counterexample(&self.counterexample_params()?)?.graph,
            GraphSpec::Complete { n } => gen_complete(*n),
            GraphSpec::Cycle { n } => gen_cycle(*n)?,
            GraphSpec::File { path } => read_edge_list(path)?,
        })
    }

    pub(crate) fn counterexample_params(&self) -> Result<CounterexampleParams, HarnessError> {
        match *self {
            GraphSpec::Counterexample { n, d, b, k, seed } => {
                Ok(CounterexampleParams { n, d, b, k, seed, strategy: ClusterStrategy::Auto })
            }
            _ => Err(HarnessError::Config("graph family is not the counterexample".into())),
        }
    }
}

/// Cutoffs of one run. Unset values follow the explicit size thresholds,
/// multiplied by `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub scale: f64,
    /// First-round components of at least this size form `W1`.
    pub w_cutoff: Option<f64>,
    /// Second-round components of at least this size count as large.
    pub large_cutoff: Option<f64>,
    pub gap_lo: Option<f64>,
    pub gap_hi: Option<f64>,
    /// Log power of the upper end of the gap window.
    pub big_c: f64,
    /// Slack of the constant-degree threshold.
    pub delta: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { scale: 1.0, w_cutoff: None, large_cutoff: None, gap_lo: None, gap_hi: None, big_c: 1.0, delta: 0.0 }
    }
}

/// The values actually used by a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedThresholds {
    pub w_cutoff: f64,
    pub large_cutoff: f64,
    pub gap_lo: f64,
    pub gap_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub mode: DegreeMode,
    /// Supercriticality; constant mode uses `alpha = 1 + eps`.
    pub eps: f64,
    /// Sprinkle constant: `p2 = s / d` (growing) or `s / (d - 1)` (constant).
    pub s: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub thresholds: Thresholds,
    /// Largest set size settled exactly by structural audits.
    pub audit_cap: usize,
    pub audit_budget: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, eps: f64, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            graph,
            mode: DegreeMode::Growing,
            eps,
            s: eps / 5.0,
            trials,
            master_seed,
            thresholds: Thresholds::default(),
            audit_cap: 12,
            audit_budget: crate::audit::DEFAULT_BUDGET,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return bad(format!("eps = {} must be positive", self.eps));
        }
        if !(self.s >= 0.0) {
            return bad(format!("sprinkle constant s = {} must be non-negative", self.s));
        }
        let t = &self.thresholds;
        if !(t.scale > 0.0) {
            return bad(format!("threshold scale {} must be positive", t.scale));
        }
        if let (Some(lo), Some(hi)) = (t.gap_lo, t.gap_hi) {
            if !(lo < hi) {
                return bad(format!("gap window [{lo}, {hi}] is empty"));
            }
        }
        if self.audit_cap == 0 {
            return bad("audit cap must be at least 1".into());
        }
        Ok(())
    }

    /// Retention probability on a `d`-regular host, capped at 1.
    pub fn retention(&self, d: usize) -> f64 {
        self.mode.retention(d, self.eps).min(1.0)
    }

    pub fn sprinkle_denominator(&self, d: usize) -> f64 {
        match self.mode {
            DegreeMode::Growing => d as f64,
            DegreeMode::Constant => (d - 1) as f64,
        }
    }

    pub fn resolve_thresholds(&self, n: usize, d: usize) -> Result<ResolvedThresholds, HarnessError> {
        let t = &self.thresholds;
        let nf = (n as f64).max(2.0);
        let ln = nf.ln();
        let (small, large) = match self.mode {
            DegreeMode::Growing => (
                small_component_threshold(ThresholdMode::Growing { eps: self.eps }, nf)?.value,
                (d as f64).powi(5) * ln.powf(t.big_c),
            ),
            DegreeMode::Constant => (
                small_component_threshold(ThresholdMode::Constant { alpha: 1.0 + self.eps, delta: t.delta }, nf)?.value,
                ln.powf(t.big_c),
            ),
        };
        let w_cutoff = t.w_cutoff.unwrap_or(t.scale * small);
        let resolved = ResolvedThresholds {
            w_cutoff,
            large_cutoff: t.large_cutoff.unwrap_or(w_cutoff),
            gap_lo: t.gap_lo.unwrap_or(t.scale * small),
            gap_hi: t.gap_hi.unwrap_or(t.scale * large),
        };
        if !(resolved.w_cutoff > 0.0 && resolved.large_cutoff > 0.0) {
            return Err(HarnessError::Config("cutoffs must be positive".into()));
        }
        Ok(resolved)
    }
}

/// Degree used for retention: the common degree, or the maximum degree of
/// an irregular host.
pub(crate) fn host_degree(g: &Graph) -> Result<usize, HarnessError> {
    let d = g.regular_degree().unwrap_or_else(|| g.max_degree());
    if d < 2 {
        return Err(HarnessError::Config(format!("host degree {d} is below 2")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(GraphSpec::Hypercube { d: 4 }, 0.5, 3, 1);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.eps = -0.2;
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
        let mut c = ok.clone();
        c.thresholds.gap_lo = Some(10.0);
        c.thresholds.gap_hi = Some(5.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn threshold_defaults_follow_formulas() {
        let c = ExperimentConfig::new(GraphSpec::Hypercube { d: 10 }, 0.5, 1, 0);
        let r = c.resolve_thresholds(1024, 10).unwrap();
        assert!((r.w_cutoff - 400.0 * 1024f64.ln()).abs() < 1e-9);
        assert_eq!(r.large_cutoff, r.w_cutoff);
        assert!((r.gap_hi - 1e5 * 1024f64.ln()).abs() < 1e-6);
        let mut scaled = c.clone();
        scaled.thresholds.scale = 0.1;
        let s = scaled.resolve_thresholds(1024, 10).unwrap();
        assert!((s.w_cutoff - 0.1 * r.w_cutoff).abs() < 1e-9);
    }
}
