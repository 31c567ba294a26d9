use thiserror::Error;

use crate::audit::AuditError;
use crate::graph::GraphError;
use crate::gw::GwError;
use crate::harness::HarnessError;
use crate::percolation::PercolationError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Whether a failure stems from bad input or from the run itself.
///
/// The command-line front end maps these onto exit codes 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Runtime,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Graph(e) => e.kind(),
            Error::Gw(e) => e.kind(),
            Error::Percolation(e) => e.kind(),
            Error::Audit(e) => e.kind(),
            Error::Harness(e) => e.kind(),
        }
    }
}
