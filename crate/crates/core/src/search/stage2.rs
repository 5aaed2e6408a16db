//! Stage 2: statements ranked by reliability feed the causal logic in
//! decreasing order while their probability stays above theta; the
//! resulting causal matrix orients the stage-1 skeleton into a PAG. The
//! ordered decision log is the per-decision reliability output.

use super::logic::{causal_logic_closure, CausalLogicMatrix, CausalMatrix, CausalStatus, LogicOutcome};
use super::stage1::{adjacency_search, Skeleton};
use super::{BccdConfig, StatementLedger};
use crate::error::Result;
use crate::graphs::{Mark, Pag};
use crate::scoring::Dataset;
use crate::statements::{CausalStatement, MappingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionStatus {
    Applied,
    SkippedConflict,
    BelowThreshold,
}

impl DecisionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionStatus::Applied => "applied",
            DecisionStatus::SkippedConflict => "skipped-conflict",
            DecisionStatus::BelowThreshold => "below-threshold",
        }
    }
}

/// One row of the decision log. Derived entries (produced by closure
/// rather than read from the ledger) carry no probability of their own.
#[derive(Debug, Clone)]
pub struct DecisionEntry {
    pub rank: usize,
    pub probability: Option<f64>,
    pub statement: CausalStatement,
    pub status: DecisionStatus,
}

#[derive(Debug, Clone, Default)]
pub struct DecisionLog {
    pub entries: Vec<DecisionEntry>,
}

impl DecisionLog {
    /// CSV rendering: rank, probability, kind, vars, status. Derived
    /// entries leave the probability cell empty.
    pub fn to_csv(&self, names: &[String]) -> String {
        let mut out = String::from("rank,probability,kind,vars,status\n");
        for e in &self.entries {
            let prob = e.probability.map(|p| format!("{p:.6}")).unwrap_or_default();
            let vars = e
                .statement
                .vars()
                .iter()
                .map(|&v| names[v as usize].clone())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.rank,
                prob,
                e.statement.kind_str(),
                vars,
                e.status.as_str()
            ));
        }
        out
    }

    pub fn applied(&self) -> impl Iterator<Item = &DecisionEntry> {
        self.entries.iter().filter(|e| e.status == DecisionStatus::Applied)
    }

    /// Count of ledger statements admitted to processing (p > theta),
    /// whether applied or skipped.
    pub fn admitted_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.probability.is_some() && e.status != DecisionStatus::BelowThreshold)
            .count()
    }
}

/// Processes ledger statements in decreasing probability order (ties broken
/// by the canonical statement encoding) through the causal logic while
/// p > theta strictly; the rest are logged below-threshold.
pub fn rank_and_infer(
    ledger: &StatementLedger,
    n: usize,
    theta: f64,
) -> (CausalLogicMatrix, CausalMatrix, DecisionLog) {
    let mut ranked: Vec<(CausalStatement, f64)> = ledger.iter().map(|(s, p)| (*s, p)).collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));

    let mut lc = CausalLogicMatrix::new(n);
    let mut log = DecisionLog::default();
    let mut rank = 0usize;
    for (s, p) in ranked {
        rank += 1;
        if !(p > theta) {
            log.entries.push(DecisionEntry {
                rank,
                probability: Some(p),
                statement: s,
                status: DecisionStatus::BelowThreshold,
            });
            continue;
        }
        let outcome = causal_logic_closure(&mut lc, &s);
        let status = match outcome {
            LogicOutcome::Applied => DecisionStatus::Applied,
            LogicOutcome::SkippedConflict => DecisionStatus::SkippedConflict,
        };
        log.entries.push(DecisionEntry { rank, probability: Some(p), statement: s, status });
        if outcome == LogicOutcome::Applied {
            for d in lc.take_derived() {
                log.entries.push(DecisionEntry {
                    rank,
                    probability: None,
                    statement: d,
                    status: DecisionStatus::Applied,
                });
            }
        }
    }
    let mc = CausalMatrix::from_logic(&lc);
    (lc, mc, log)
}

/// Orients the skeleton with the causal matrix: on edge X - Y the mark at
/// X is a tail when X causes Y, an arrowhead when X does not cause Y, and
/// a circle when unknown.
pub fn map_to_pag(skeleton: &Skeleton, mc: &CausalMatrix) -> Result<Pag> {
    let n = skeleton.node_count();
    let mut pag = Pag::empty(n)?;
    for (x, y) in skeleton.edges() {
        let mark_at = |from: usize, to: usize| match mc.status(from, to) {
            CausalStatus::Causes => Mark::Tail,
            CausalStatus::NotCauses => Mark::Arrow,
            CausalStatus::Unknown => Mark::Circle,
        };
        pag.set_edge(x, y, mark_at(x, y), mark_at(y, x))?;
    }
    Ok(pag)
}

/// Everything a discovery run produces.
#[derive(Debug, Clone)]
pub struct Discovery {
    pub skeleton: Skeleton,
    pub ledger: StatementLedger,
    pub pag: Pag,
    pub causal_matrix: CausalMatrix,
    pub log: DecisionLog,
}

/// End-to-end run: stage 1, stage 2, PAG assembly. Deterministic given
/// dataset and config, regardless of worker count.
pub fn discover(ds: &Dataset, cfg: &BccdConfig, mapping: &MappingTable) -> Result<Discovery> {
    cfg.validate()?;
    let n = ds.var_count();
    if n < 2 {
        // single variable: nothing to relate
        let skeleton = Skeleton::complete(n);
        let mc = CausalMatrix::unknown(n);
        return Ok(Discovery {
            pag: map_to_pag(&skeleton, &mc)?,
            skeleton,
            ledger: StatementLedger::new(),
            causal_matrix: mc,
            log: DecisionLog::default(),
        });
    }
    let cfg_effective = BccdConfig { k_max: cfg.k_max.min(n), ..cfg.clone() };
    let (skeleton, ledger) = adjacency_search(ds, &cfg_effective, mapping)?;
    let (lc, mc, log) = rank_and_infer(&ledger, n, cfg.theta);
    debug_assert!(lc.check_consistent().is_ok());
    let pag = map_to_pag(&skeleton, &mc)?;
    Ok(Discovery { skeleton, ledger, pag, causal_matrix: mc, log })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ledger_gives_unknown_matrix() {
        let (lc, mc, log) = rank_and_infer(&StatementLedger::new(), 3, 0.5);
        lc.check_consistent().unwrap();
        assert!(log.entries.is_empty());
        assert!(mc.decided().iter().all(|&(_, _, s)| s == CausalStatus::NotCauses));
        assert_eq!(mc.decided().len(), 0);
    }

    #[test]
    fn statements_at_theta_are_not_processed() {
        let mut ledger = StatementLedger::new();
        ledger.update(CausalStatement::non_cause(0, 1), 0.5);
        ledger.update(CausalStatement::non_cause(1, 0), 0.51);
        let (_, mc, log) = rank_and_infer(&ledger, 2, 0.5);
        assert_eq!(mc.status(1, 0), CausalStatus::NotCauses);
        assert_eq!(mc.status(0, 1), CausalStatus::Unknown);
        let below: Vec<_> = log
            .entries
            .iter()
            .filter(|e| e.status == DecisionStatus::BelowThreshold)
            .collect();
        assert_eq!(below.len(), 1);
    }

    #[test]
    fn first_writer_wins_on_conflict() {
        let mut ledger = StatementLedger::new();
        ledger.update(CausalStatement::cause(0, 1), 0.9);
        ledger.update(CausalStatement::non_cause(0, 1), 0.8);
        let (_, mc, log) = rank_and_infer(&ledger, 2, 0.5);
        assert_eq!(mc.status(0, 1), CausalStatus::Causes);
        assert!(log
            .entries
            .iter()
            .any(|e| e.status == DecisionStatus::SkippedConflict
                && e.statement == CausalStatement::non_cause(0, 1)));
    }

    #[test]
    fn disjunction_elimination_is_logged_as_derived() {
        let mut ledger = StatementLedger::new();
        ledger.update(CausalStatement::disjunctive_cause(2, 0, 1), 0.9);
        ledger.update(CausalStatement::non_cause(2, 0), 0.8);
        let (_, mc, log) = rank_and_infer(&ledger, 3, 0.5);
        assert_eq!(mc.status(2, 1), CausalStatus::Causes);
        let derived: Vec<_> = log.entries.iter().filter(|e| e.probability.is_none()).collect();
        assert_eq!(derived.len(), 1);
        assert_eq!(derived[0].statement, CausalStatement::cause(2, 1));
    }

    #[test]
    fn ordering_is_deterministic_under_ties() {
        let mut ledger = StatementLedger::new();
        ledger.update(CausalStatement::non_cause(1, 0), 0.7);
        ledger.update(CausalStatement::non_cause(0, 1), 0.7);
        let (_, _, log) = rank_and_infer(&ledger, 2, 0.5);
        // canonical encoding orders NonCause(0, 1) first
        assert_eq!(log.entries[0].statement, CausalStatement::non_cause(0, 1));
        assert_eq!(log.entries[1].statement, CausalStatement::non_cause(1, 0));
    }

    #[test]
    fn transitive_cause_cycles_are_rejected() {
        let mut ledger = StatementLedger::new();
        ledger.update(CausalStatement::cause(0, 1), 0.95);
        ledger.update(CausalStatement::cause(1, 2), 0.9);
        ledger.update(CausalStatement::cause(2, 0), 0.85);
        let (lc, mc, log) = rank_and_infer(&ledger, 3, 0.5);
        lc.check_consistent().unwrap();
        assert_eq!(mc.status(0, 1), CausalStatus::Causes);
        assert_eq!(mc.status(1, 2), CausalStatus::Causes);
        assert_eq!(mc.status(0, 2), CausalStatus::Causes); // derived
        assert!(log.entries.iter().any(|e| e.status == DecisionStatus::SkippedConflict));
        assert_eq!(mc.status(2, 0), CausalStatus::Unknown);
    }
}
