//! Bayesian constraint-based causal discovery.
//!
//! The pipeline scores all small DAG structures over variable subsets with a
//! Bayesian Dirichlet metric, converts structure posteriors into
//! probability-ranked logical causal statements, and processes those
//! statements in decreasing order of reliability into a partial ancestral
//! graph with a per-decision confidence log.
//!
//! Modules follow the pipeline:
//! - [`graphs`]: DAG/MAG/PAG structures, separation criteria, latent
//!   projection, equivalence classes, enumeration.
//! - [`scoring`]: contingency counting, the Bayesian Dirichlet score family,
//!   structure priors and posteriors.
//! - [`statements`]: logical causal statements, the uDAG inference rules,
//!   the brute-force oracle, and the precomputed structure-to-statement
//!   mapping table.
//! - [`search`]: the two-stage discovery algorithm and PAG assembly.
//! - [`simgen`]: synthetic ground truth generation and evaluation metrics.

pub mod error;
pub mod graphs;
pub mod scoring;
pub mod search;
pub mod simgen;
pub mod statements;

pub use error::{BccdError, Result};
