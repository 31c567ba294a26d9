use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::Seeds;
use super::{ExperimentConfig, HarnessError};
use crate::audit::{
    audit_profile, spectral_lambda, AuditReport, ExpansionProfile, LayerSpectrum, ProfileMode, PropertyStatus,
    SpectralEstimate,
};
use crate::graph::{gen_counterexample, ClusterStrategy};
use crate::gw::{counterexample_expectation, DegreeMode};
use crate::percolation::{components, sample_site};
use crate::seed::derive_seed;

/// Smallest `alpha` for which the cluster copies carry the local
/// properties: `(1 - alpha/2)(d - 10b) >= (1 - alpha) d` exactly when
/// `alpha >= 20b / (d + 10b)`.
pub fn construction_alpha(d: usize, b: usize) -> f64 {
    20.0 * b as f64 / (d + 10 * b) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralAudit {
    pub regular: bool,
    pub clusters_independent: bool,
    pub alpha: f64,
    pub h1_spectrum: SpectralEstimate,
    pub audit: AuditReport,
    /// Regular, independent clusters, no violation or exhausted budget, and
    /// the global property covered beyond the cap.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleTrial {
    pub trial: usize,
    #[serde(rename = "L1")]
    pub l1: usize,
    #[serde(rename = "L2")]
    pub l2: usize,
    /// Components of size at least `eps d ln n`.
    pub large_components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub config: ExperimentConfig,
    pub n: usize,
    pub d: usize,
    pub b: usize,
    pub cluster_size: usize,
    pub strategy: ClusterStrategy,
    pub p: f64,
    pub size_cutoff: f64,
    pub trials: Vec<CounterexampleTrial>,
    pub mean_large_components: f64,
    pub trials_with_two_large: usize,
    /// `n^0.9 / (200 b^2 d^4 ln^2 n)`.
    pub expectation: f64,
    pub structural: StructuralAudit,
    pub seeds: Seeds,
}

/// Builds the clustered construction, audits its structure and counts large
/// components over seeded site-percolation trials.
pub fn run_counterexample(config: &ExperimentConfig) -> Result<CounterexampleReport, HarnessError> {
    config.validate()?;
    if config.mode != DegreeMode::Growing {
        return Err(HarnessError::Config("the counterexample runs in growing mode".into()));
    }
    let params = config.graph.counterexample_params()?;
    let ce = gen_counterexample(&params)?;
    let (g, n, d, b) = (&ce.graph, params.n, params.d, params.b);

    let h1_spectrum = spectral_lambda(&ce.h1, 1e-4, 1_000_000, derive_seed(config.master_seed, u64::MAX))?;
    let alpha = construction_alpha(d, b);
    let mut profile = ExpansionProfile::new(ProfileMode::Q, config.audit_cap);
    profile.alpha = alpha;
    profile.b = b as f64;
    profile.budget = config.audit_budget;
    profile.spectra.push(LayerSpectrum {
        label: "H1".into(),
        degree: (10 * b) as f64,
        lambda: h1_spectrum.certified_lambda(),
        own_graph: false,
    });
    let audit = audit_profile(g, &profile)?;
    let regular = g.regular_degree() == Some(d);
    let clusters_independent = ce.partition.is_independent_in(&ce.h1);
    let settled = |name: &str| {
        audit.property(name).is_some_and(|p| {
            matches!(p.status, PropertyStatus::VerifiedToCap | PropertyStatus::SpectrallyCertified)
        })
    };
    let passed = regular
        && clusters_independent
        && settled("Q2")
        && settled("Q3")
        && audit.property("Q1").is_some_and(|p| p.status == PropertyStatus::SpectrallyCertified);

    let p = config.retention(d);
    let size_cutoff = config.eps * d as f64 * (n as f64).ln();
    let trials: Vec<CounterexampleTrial> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let retained = sample_site(g, p, derive_seed(config.master_seed, t as u64))?;
            let stats = components(g, &retained)?;
            Ok(CounterexampleTrial {
                trial: t,
                l1: stats.l1,
                l2: stats.l2,
                large_components: stats.sizes.iter().take_while(|&&s| s as f64 >= size_cutoff).count(),
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let mean_large_components =
        trials.iter().map(|t| t.large_components as f64).sum::<f64>() / trials.len() as f64;
    Ok(CounterexampleReport {
        config: config.clone(),
        n,
        d,
        b,
        cluster_size: ce.cluster_size,
        strategy: ce.strategy_used,
        p,
        size_cutoff,
        trials_with_two_large: trials.iter().filter(|t| t.large_components >= 2).count(),
        trials,
        mean_large_components,
        expectation: counterexample_expectation(n as f64, d as f64, b as f64),
        structural: StructuralAudit { regular, clusters_independent, alpha, h1_spectrum, audit, passed },
        seeds: Seeds::new(config.master_seed),
    })
}
