use crate::statements::CausalStatement;
use std::collections::BTreeMap;

/// Running maximum posterior probability per canonical causal statement
/// (over global variable ids). Different subsets yield lower bounds for the
/// same statement; the best bound wins and an update never decreases a
/// stored value.
#[derive(Debug, Clone, Default)]
pub struct StatementLedger {
    entries: BTreeMap<CausalStatement, f64>,
}

impl StatementLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Max-merge a probability estimate. Returns the stored value.
    pub fn update(&mut self, statement: CausalStatement, p: f64) -> f64 {
        debug_assert!((0.0..=1.0 + 1e-12).contains(&p), "probability out of range: {p}");
        let entry = self.entries.entry(statement).or_insert(0.0);
        if p > *entry {
            *entry = p;
        }
        *entry
    }

    pub fn get(&self, statement: &CausalStatement) -> Option<f64> {
        self.entries.get(statement).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical statement order.
    pub fn iter(&self) -> impl Iterator<Item = (&CausalStatement, f64)> {
        self.entries.iter().map(|(s, p)| (s, *p))
    }

    /// Entrywise "every probability here is <= the other's" comparison;
    /// replaying a prefix of updates must satisfy this against the final
    /// ledger.
    pub fn dominated_by(&self, other: &StatementLedger) -> bool {
        self.entries
            .iter()
            .all(|(s, p)| other.entries.get(s).is_some_and(|q| p <= q))
    }

    /// Merge by entrywise maximum (commutative, associative).
    pub fn merge_max(&mut self, other: &StatementLedger) {
        for (s, p) in &other.entries {
            self.update(*s, *p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn updates_never_decrease() {
        let mut l = StatementLedger::new();
        let s = CausalStatement::non_cause(0, 1);
        assert_eq!(l.update(s, 0.4), 0.4);
        assert_eq!(l.update(s, 0.2), 0.4);
        assert_eq!(l.update(s, 0.9), 0.9);
        assert_eq!(l.get(&s), Some(0.9));
    }

    #[test]
    fn merge_is_entrywise_max() {
        let mut a = StatementLedger::new();
        let mut b = StatementLedger::new();
        let s1 = CausalStatement::non_cause(0, 1);
        let s2 = CausalStatement::non_adjacent(0, 1);
        a.update(s1, 0.3);
        b.update(s1, 0.6);
        b.update(s2, 0.2);
        a.merge_max(&b);
        assert_eq!(a.get(&s1), Some(0.6));
        assert_eq!(a.get(&s2), Some(0.2));
        let mut ba = StatementLedger::new();
        ba.update(s1, 0.6);
        ba.update(s2, 0.2);
        assert!(ba.dominated_by(&a) && a.dominated_by(&a));
    }
}
