//! Shared rule engine turning conditional-(in)dependence facts into logical
//! causal statements.
//!
//! Rule 1: a minimal independence x _||_ y | [Z] (certified independent at
//! Z, certified dependent at every single-element removal) yields
//! (z => x) v (z => y) for every z in Z.
//!
//! Rule 2: a minimal dependence x _|/|_ y | W u [z] (certified dependent,
//! certified independent once z is removed) yields z =/=> v for every
//! v in {x, y} u W.
//!
//! Absent causal relations also come from the equivalence class: no
//! potentially directed path from a to b in the class PAG means a =/=> b.
//!
//! The result is closed under transitivity of causes and disjunction
//! elimination, mirroring the closure used during search.

use super::CausalStatement;
use crate::graphs::{potentially_directed_path, NodeMask, Pag};
use std::collections::BTreeSet;

/// Certification status of one CI query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiStatus {
    Independent,
    Dependent,
    Unknown,
}

/// Runs rules 1 and 2 over every pair and conditioning set, adds
/// non-adjacency for separable pairs and PAG-level non-causes, then closes.
pub(crate) fn derive_statements(
    n: usize,
    query: &impl Fn(usize, usize, NodeMask) -> CiStatus,
    pag: &Pag,
) -> BTreeSet<CausalStatement> {
    let mut out = BTreeSet::new();
    let full: NodeMask = (1 << n) - 1;
    for x in 0..n {
        for y in (x + 1)..n {
            let others = full & !(1 << x) & !(1 << y);
            let mut separable = false;
            for z in crate::graphs::subsets_of(others) {
                match query(x, y, z) {
                    CiStatus::Independent => {
                        separable = true;
                        if z == 0 {
                            continue;
                        }
                        let removals_all_dependent = iter_bits(z)
                            .all(|zi| query(x, y, z & !(1 << zi)) == CiStatus::Dependent);
                        if removals_all_dependent {
                            for zi in iter_bits(z) {
                                out.insert(CausalStatement::disjunctive_cause(
                                    zi as u16, x as u16, y as u16,
                                ));
                            }
                        }
                    }
                    CiStatus::Dependent => {
                        for zi in iter_bits(z) {
                            if query(x, y, z & !(1 << zi)) == CiStatus::Independent {
                                out.insert(CausalStatement::non_cause(zi as u16, x as u16));
                                out.insert(CausalStatement::non_cause(zi as u16, y as u16));
                                for wi in iter_bits(z & !(1 << zi)) {
                                    out.insert(CausalStatement::non_cause(zi as u16, wi as u16));
                                }
                            }
                        }
                    }
                    CiStatus::Unknown => {}
                }
            }
            if separable {
                out.insert(CausalStatement::non_adjacent(x as u16, y as u16));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let pdp = potentially_directed_path(pag, a, b).expect("ids validated");
            if !pdp {
                out.insert(CausalStatement::non_cause(a as u16, b as u16));
            }
        }
    }
    close_statements(&mut out);
    out
}

fn iter_bits(mask: NodeMask) -> impl Iterator<Item = usize> {
    (0..u32::BITS as usize).filter(move |&i| mask >> i & 1 == 1)
}

/// Fixpoint closure under cause transitivity and disjunction elimination.
/// Facts fed in here come from sound rules on a single structure class, so
/// cause/non-cause contradictions cannot arise (checked in debug builds).
pub(crate) fn close_statements(set: &mut BTreeSet<CausalStatement>) {
    loop {
        let mut derived: Vec<CausalStatement> = Vec::new();
        let causes: Vec<(u16, u16)> = set
            .iter()
            .filter_map(|s| match s {
                CausalStatement::Cause { z, x } => Some((*z, *x)),
                _ => None,
            })
            .collect();
        let non_cause = |z: u16, x: u16| set.contains(&CausalStatement::non_cause(z, x));
        for s in set.iter() {
            if let CausalStatement::DisjunctiveCause { z, x, y } = s {
                if non_cause(*z, *x) {
                    derived.push(CausalStatement::cause(*z, *y));
                }
                if non_cause(*z, *y) {
                    derived.push(CausalStatement::cause(*z, *x));
                }
            }
        }
        for &(a, b) in &causes {
            for &(b2, c) in &causes {
                if b == b2 && a != c {
                    derived.push(CausalStatement::cause(a, c));
                }
            }
        }
        let before = set.len();
        for d in derived {
            debug_assert!(
                !matches!(d, CausalStatement::Cause { z, x } if set.contains(&CausalStatement::non_cause(z, x))),
                "closure derived a cause contradicting a non-cause: {d:?}"
            );
            set.insert(d);
        }
        if set.len() == before {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Mark;

    fn no_pag(n: usize) -> Pag {
        // a complete all-circle PAG never produces pdp-based non-causes
        let mut p = Pag::empty(n).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                p.set_edge(i, j, Mark::Circle, Mark::Circle).unwrap();
            }
        }
        p
    }

    #[test]
    fn rule_2_on_a_collider_pattern() {
        // facts of X -> Z <- Y (x=0, y=1, z=2): X _||_ Y, X _|/|_ Y | Z.
        let query = |x: usize, y: usize, z: NodeMask| {
            if (x, y) == (0, 1) {
                if z == 0 {
                    CiStatus::Independent
                } else {
                    CiStatus::Dependent
                }
            } else {
                CiStatus::Dependent
            }
        };
        let out = derive_statements(3, &query, &no_pag(3));
        assert!(out.contains(&CausalStatement::non_adjacent(0, 1)));
        assert!(out.contains(&CausalStatement::non_cause(2, 0)));
        assert!(out.contains(&CausalStatement::non_cause(2, 1)));
    }

    #[test]
    fn rule_1_with_closure_produces_a_cause() {
        // X _||_ W | [Z] plus Z =/=> X forces Z => W by disjunction
        // elimination.
        let mut set = BTreeSet::from([
            CausalStatement::disjunctive_cause(2, 0, 3),
            CausalStatement::non_cause(2, 0),
        ]);
        close_statements(&mut set);
        assert!(set.contains(&CausalStatement::cause(2, 3)));
    }

    #[test]
    fn transitivity_closes() {
        let mut set = BTreeSet::from([CausalStatement::cause(0, 1), CausalStatement::cause(1, 2)]);
        close_statements(&mut set);
        assert!(set.contains(&CausalStatement::cause(0, 2)));
    }
}
