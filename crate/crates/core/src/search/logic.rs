//! The causal-logic state built up during stage 2: pairwise cause /
//! non-cause facts plus asserted disjunctions, closed to a fixpoint under
//! transitivity, disjunction elimination, and irreflexivity. Earlier (more
//! reliable) statements are never overridden: a statement whose closure
//! contradicts the existing state is rolled back whole and skipped.

use crate::error::{invalid, Result};
use crate::statements::CausalStatement;
use std::collections::BTreeSet;

/// Status of an ordered pair (z, x): does z cause x?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CausalStatus {
    #[default]
    Unknown,
    Causes,
    NotCauses,
}

/// Pairwise causal facts plus the set of asserted disjunctions.
#[derive(Debug, Clone)]
pub struct CausalLogicMatrix {
    n: usize,
    pair: Vec<CausalStatus>,
    /// asserted "(z => x) or (z => y)" triples, canonical x < y
    disjunctions: BTreeSet<(u16, u16, u16)>,
    /// causes derived (not literally inserted) by the last closure call
    last_derived: Vec<CausalStatement>,
}

/// Result of feeding one statement through the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicOutcome {
    Applied,
    /// contradicted existing information; statement dropped whole
    SkippedConflict,
}

impl CausalLogicMatrix {
    pub fn new(n: usize) -> Self {
        CausalLogicMatrix {
            n,
            pair: vec![CausalStatus::Unknown; n * n],
            disjunctions: BTreeSet::new(),
            last_derived: Vec::new(),
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn status(&self, z: usize, x: usize) -> CausalStatus {
        self.pair[z * self.n + x]
    }

    fn set(&mut self, z: usize, x: usize, s: CausalStatus) {
        self.pair[z * self.n + x] = s;
    }

    /// Derived facts produced by the most recent successful closure call
    /// (cause/non-cause entries not literally present in the statement).
    pub fn take_derived(&mut self) -> Vec<CausalStatement> {
        std::mem::take(&mut self.last_derived)
    }

    /// Consistency check: no pair both ways, no cause cycles, disjunction
    /// elimination saturated.
    pub fn check_consistent(&self) -> Result<()> {
        for z in 0..self.n {
            if self.status(z, z) == CausalStatus::Causes {
                return Err(invalid(format!("cause cycle at node {z}")));
            }
            for x in 0..self.n {
                if z == x {
                    continue;
                }
                if self.status(z, x) == CausalStatus::Causes {
                    if self.status(x, z) == CausalStatus::Causes {
                        return Err(invalid(format!("mutual causes on ({z}, {x})")));
                    }
                    for y in 0..self.n {
                        if self.status(x, y) == CausalStatus::Causes
                            && self.status(z, y) != CausalStatus::Causes
                        {
                            return Err(invalid("transitivity not closed"));
                        }
                    }
                }
            }
        }
        for &(z, x, y) in &self.disjunctions {
            let (z, x, y) = (z as usize, x as usize, y as usize);
            if self.status(z, x) == CausalStatus::NotCauses
                && self.status(z, y) == CausalStatus::NotCauses
            {
                return Err(invalid("disjunction with both sides refuted"));
            }
        }
        Ok(())
    }
}

/// Feeds one causal statement into the matrix. Non-adjacency statements do
/// not write here (they live in the skeleton) and always apply.
pub fn causal_logic_closure(lc: &mut CausalLogicMatrix, s: &CausalStatement) -> LogicOutcome {
    let snapshot = (lc.pair.clone(), lc.disjunctions.clone());
    lc.last_derived.clear();
    let ok = try_apply(lc, s);
    if ok {
        LogicOutcome::Applied
    } else {
        lc.pair = snapshot.0;
        lc.disjunctions = snapshot.1;
        lc.last_derived.clear();
        LogicOutcome::SkippedConflict
    }
}

fn try_apply(lc: &mut CausalLogicMatrix, s: &CausalStatement) -> bool {
    match *s {
        CausalStatement::NonAdjacent { .. } => true,
        CausalStatement::NonCause { z, x } => assert_noncause(lc, z as usize, x as usize),
        CausalStatement::Cause { z, x } => assert_cause(lc, z as usize, x as usize, false),
        CausalStatement::DisjunctiveCause { z, x, y } => {
            let (z, x, y) = (z as usize, x as usize, y as usize);
            match (lc.status(z, x), lc.status(z, y)) {
                (CausalStatus::NotCauses, CausalStatus::NotCauses) => false,
                (CausalStatus::NotCauses, _) => {
                    lc.disjunctions.insert((z as u16, x as u16, y as u16));
                    assert_cause(lc, z, y, true)
                }
                (_, CausalStatus::NotCauses) => {
                    lc.disjunctions.insert((z as u16, x as u16, y as u16));
                    assert_cause(lc, z, x, true)
                }
                _ => {
                    lc.disjunctions.insert((z as u16, x as u16, y as u16));
                    true
                }
            }
        }
    }
}

fn assert_noncause(lc: &mut CausalLogicMatrix, z: usize, x: usize) -> bool {
    match lc.status(z, x) {
        CausalStatus::Causes => false, // earlier information wins
        CausalStatus::NotCauses => true,
        CausalStatus::Unknown => {
            lc.set(z, x, CausalStatus::NotCauses);
            // a refuted disjunct forces the other side
            let fired: Vec<(usize, usize)> = lc
                .disjunctions
                .iter()
                .filter_map(|&(dz, dx, dy)| {
                    let (dz, dx, dy) = (dz as usize, dx as usize, dy as usize);
                    if dz == z && dx == x {
                        Some((dz, dy))
                    } else if dz == z && dy == x {
                        Some((dz, dx))
                    } else {
                        None
                    }
                })
                .collect();
            for (dz, other) in fired {
                if !assert_cause(lc, dz, other, true) {
                    return false;
                }
            }
            true
        }
    }
}

fn assert_cause(lc: &mut CausalLogicMatrix, z: usize, x: usize, derived: bool) -> bool {
    if z == x {
        return false; // irreflexivity
    }
    match lc.status(z, x) {
        CausalStatus::NotCauses => false,
        CausalStatus::Causes => true,
        CausalStatus::Unknown => {
            lc.set(z, x, CausalStatus::Causes);
            if derived {
                lc.last_derived.push(CausalStatement::cause(z as u16, x as u16));
            }
            // transitive closure: predecessors of z reach x, x's successors
            // are reached by z
            let successors: Vec<usize> =
                (0..lc.n).filter(|&y| lc.status(x, y) == CausalStatus::Causes).collect();
            for y in successors {
                if !assert_cause(lc, z, y, true) {
                    return false;
                }
            }
            let predecessors: Vec<usize> =
                (0..lc.n).filter(|&w| lc.status(w, z) == CausalStatus::Causes).collect();
            for w in predecessors {
                if !assert_cause(lc, w, x, true) {
                    return false;
                }
            }
            // disjunctions fire on refutation only; a new cause triggers
            // nothing further here
            true
        }
    }
}

/// Final pairwise causal relations extracted from the logic matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalMatrix {
    n: usize,
    entries: Vec<CausalStatus>,
}

impl CausalMatrix {
    pub fn from_logic(lc: &CausalLogicMatrix) -> CausalMatrix {
        let mut entries = lc.pair.clone();
        for v in 0..lc.n {
            entries[v * lc.n + v] = CausalStatus::NotCauses; // irreflexivity
        }
        CausalMatrix { n: lc.n, entries }
    }

    pub fn unknown(n: usize) -> CausalMatrix {
        let mut entries = vec![CausalStatus::Unknown; n * n];
        for v in 0..n {
            entries[v * n + v] = CausalStatus::NotCauses;
        }
        CausalMatrix { n, entries }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn status(&self, z: usize, x: usize) -> CausalStatus {
        self.entries[z * self.n + x]
    }

    pub fn set_status(&mut self, z: usize, x: usize, s: CausalStatus) {
        self.entries[z * self.n + x] = s;
    }

    /// Decided off-diagonal entries (status != Unknown).
    pub fn decided(&self) -> Vec<(usize, usize, CausalStatus)> {
        let mut out = Vec::new();
        for z in 0..self.n {
            for x in 0..self.n {
                if z != x && self.status(z, x) != CausalStatus::Unknown {
                    out.push((z, x, self.status(z, x)));
                }
            }
        }
        out
    }
}
