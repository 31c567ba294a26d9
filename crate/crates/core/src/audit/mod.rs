//! Expansion audits: exact connected-set enumeration, per-size extrema,
//! profile audits against explicit inequalities, spectral estimates and
//! mixing certificates.

mod census;
mod enumerate;
mod extrema;
mod profile;
mod spectral;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ErrorKind;

pub use census::{short_cycle_census, CycleCensus};
pub use enumerate::{enumerate_connected_sets, DEFAULT_BUDGET};
pub use extrema::{
    local_sparsity_max, min_edge_expansion, min_vertex_expansion, set_quantities, ExtremaTable,
    Quantity, SetQuantities, SizeExtremum,
};
pub use profile::{
    audit_profile, AuditReport, ExpansionProfile, LayerSpectrum, ProfileMode, PropertyReport,
    PropertyStatus, SizeFinding, Violation,
};
pub use spectral::{
    alon_milman_bound, mixing_interval, sparsity_upper_bound, spectral_lambda, tanner_bound,
    MixingInterval, SpectralEstimate,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("enumeration budget of {budget} sets exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("graph is not regular")]
    NotRegular,
    #[error("power iteration stopped at residual {residual:e} after {iterations} iterations")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("lambda = {lambda} must lie in [0, d = {d}]")]
    InvalidLambda { lambda: f64, d: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl AuditError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            AuditError::BudgetExceeded { .. } | AuditError::NonConvergence { .. } => ErrorKind::Runtime,
            _ => ErrorKind::Validation,
        }
    }
}

/// Which graph a set must be connected in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    /// Connected in the graph itself.
    G,
    /// Connected in the square: vertices at distance at most 2 are linked.
    Square,
}
