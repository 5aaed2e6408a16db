//! Contingency counting, the Bayesian Dirichlet structure score (K2 and
//! BDeu priors), structure priors including the consistent multi-level
//! prior, and posterior distributions over structure sets.

mod bd;
mod counts;
mod dataset;
mod posterior;
mod priors;

pub use bd::{log_bd_score, DirichletPrior};
pub use counts::{count_table, CountTable};
pub use dataset::{Dataset, Schema};
pub use posterior::{
    independence_probability, minimal_dependence_probability, structure_posterior, FamilyScoreCache,
    StructurePosterior,
};
pub use priors::{structure_prior_multilevel, structure_prior_uniform, StructurePrior};
