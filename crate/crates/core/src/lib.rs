//! A percolation laboratory for regular graphs.
//!
//! The crate is organised in layers that mirror a typical experiment:
//!
//! - [`graph`]: immutable compressed graphs, the edge-list format and the
//!   host-graph generators (hypercube, random regular, clustered
//!   counterexample).
//! - [`gw`]: Galton-Watson fixed points for the giant-component density,
//!   sprinkling splits and the explicit size thresholds.
//! - [`percolation`]: site and bond sampling, union-find components, the
//!   queue-driven exploration process and two-round exposure.
//! - [`audit`]: exact connected-set enumeration, expansion audits, spectral
//!   estimates and mixing certificates.
//! - [`harness`]: seeded Monte Carlo runs and their JSON/CSV reports.

pub mod audit;
pub mod error;
pub mod graph;
pub mod gw;
pub mod harness;
pub mod percolation;
pub mod seed;

pub use error::{Error, ErrorKind, Result};
pub use graph::{Graph, VertexPartition};
