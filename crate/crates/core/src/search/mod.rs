//! The two-stage discovery algorithm: adjacency search with
//! statement-probability accumulation (stage 1), ranked logical inference
//! with conflict resolution (stage 2), and PAG assembly.

mod ledger;
mod logic;
mod stage1;
mod stage2;

pub use ledger::StatementLedger;
pub use logic::{causal_logic_closure, CausalLogicMatrix, CausalMatrix, CausalStatus, LogicOutcome};
pub use stage1::{adjacency_search, score_subset, Skeleton};
pub use stage2::{
    discover, map_to_pag, rank_and_infer, DecisionEntry, DecisionLog, DecisionStatus, Discovery,
};

use crate::error::{invalid, Result};
use crate::scoring::DirichletPrior;

/// Structure-prior construction choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructurePriorKind {
    /// uniform over the canonical DAGs at each level (the baseline)
    UniformPerLevel,
    /// consistent multi-level prior marginalized down from the reference
    /// level (k_max)
    Multilevel,
}

/// Tuning knobs of a discovery run; defaults follow the reference
/// configuration (theta = 0.5, K2, uniform priors, k_max = 5).
#[derive(Debug, Clone)]
pub struct BccdConfig {
    /// decision threshold: statements act only when p > theta (strict)
    pub theta: f64,
    /// largest scored subset size (2..=5)
    pub k_max: usize,
    pub dirichlet: DirichletPrior,
    pub structure_prior: StructurePriorKind,
    /// worker cap for stage 1; None uses the global pool
    pub jobs: Option<usize>,
}

impl Default for BccdConfig {
    fn default() -> Self {
        BccdConfig {
            theta: 0.5,
            k_max: 5,
            dirichlet: DirichletPrior::K2,
            structure_prior: StructurePriorKind::UniformPerLevel,
            jobs: None,
        }
    }
}

impl BccdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(invalid(format!("theta must be in (0, 1], got {}", self.theta)));
        }
        if self.k_max < 2 || self.k_max > crate::graphs::MAX_ENUM_NODES {
            return Err(invalid(format!(
                "k_max must be in 2..={}, got {}",
                crate::graphs::MAX_ENUM_NODES,
                self.k_max
            )));
        }
        Ok(())
    }
}
