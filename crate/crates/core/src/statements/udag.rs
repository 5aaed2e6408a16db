//! Reading (in)dependencies from a DAG treated as a possibly-unfaithful
//! approximation (uDAG): independencies from d-separation are always valid;
//! dependencies are certified only by the edge-removal criterion or by path
//! uniqueness.

use super::engine::{derive_statements, CiStatus};
use super::CausalStatement;
use crate::error::{capacity, Result};
use crate::graphs::{
    check_query, m_connecting_paths, mask_of, Dag, LevelTables, Mag, NodeMask, MAX_ENUM_NODES,
};
use std::collections::BTreeSet;

fn check_capacity(g: &Dag) -> Result<()> {
    if g.node_count() > MAX_ENUM_NODES {
        return Err(capacity(format!(
            "uDAG operations are limited to {MAX_ENUM_NODES} nodes, got {}",
            g.node_count()
        )));
    }
    Ok(())
}

/// The pairwise reads work on any graph the fingerprint machinery covers;
/// enumeration-bound operations stay capped at [`MAX_ENUM_NODES`].
fn check_query_capacity(g: &Dag) -> Result<()> {
    const MAX_QUERY_NODES: usize = 6;
    if g.node_count() > MAX_QUERY_NODES {
        return Err(capacity(format!(
            "uDAG queries are limited to {MAX_QUERY_NODES} nodes, got {}",
            g.node_count()
        )));
    }
    Ok(())
}

/// Pairwise uDAG reading. `Independent` when d-separation holds;
/// `Dependent` when the pair is connected AND removing the x - y edge
/// separates them (certified by the edge-removal criterion); `Unknown`
/// otherwise (an apparent dependence a uDAG is not allowed to trust).
pub fn udag_ci_query(g: &Dag, x: usize, y: usize, z: &[usize]) -> Result<CiStatus> {
    check_query_capacity(g)?;
    let zmask = mask_of(z);
    check_query(g.node_count(), x, y, zmask)?;
    Ok(udag_ci_query_masks(g, x, y, zmask))
}

pub(crate) fn udag_ci_query_masks(g: &Dag, x: usize, y: usize, z: NodeMask) -> CiStatus {
    if g.d_separated_masks(x, y, z) {
        return CiStatus::Independent;
    }
    if g.adjacent(x, y) && g.without_pair(x, y).d_separated_masks(x, y, z) {
        return CiStatus::Dependent;
    }
    CiStatus::Unknown
}

/// Indirect-dependence reading: `Dependent` when exactly one unblocked
/// (simple) path connects x and y given z; `Unknown` otherwise.
pub fn udag_unique_path_query(g: &Dag, x: usize, y: usize, z: &[usize]) -> Result<CiStatus> {
    check_query_capacity(g)?;
    let zmask = mask_of(z);
    check_query(g.node_count(), x, y, zmask)?;
    Ok(udag_unique_path_masks(g, x, y, zmask))
}

pub(crate) fn udag_unique_path_masks(g: &Dag, x: usize, y: usize, z: NodeMask) -> CiStatus {
    let mag = Mag::from(g);
    if m_connecting_paths(&mag, x, y, z, 2).len() == 1 {
        CiStatus::Dependent
    } else {
        CiStatus::Unknown
    }
}

/// Combined certification used by the mapping rules: independence from
/// d-separation, dependence from either certificate.
pub(crate) fn certified_status(g: &Dag, x: usize, y: usize, z: NodeMask) -> CiStatus {
    match udag_ci_query_masks(g, x, y, z) {
        CiStatus::Unknown => udag_unique_path_masks(g, x, y, z),
        s => s,
    }
}

/// Absent causal relations identifiable from an optimal uDAG: z =/=> x for
/// every ordered pair with no potentially directed path from z to x in the
/// PAG of the uDAG's equivalence class.
pub fn noncause_statements_from_optimal_udag(g: &Dag) -> Result<BTreeSet<CausalStatement>> {
    check_capacity(g)?;
    let tables = LevelTables::get(g.node_count())?;
    let idx = tables
        .index_of(g)
        .ok_or_else(|| crate::error::BccdError::Invariant("graph missing from enumeration".into()))?;
    let pag = &tables.classes[tables.class_of[idx] as usize].pag;
    let n = g.node_count();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && !crate::graphs::potentially_directed_path(pag, a, b)? {
                out.insert(CausalStatement::non_cause(a as u16, b as u16));
            }
        }
    }
    Ok(out)
}

/// Largest level at which a uDAG may be read as if it were faithful:
/// through four nodes the statements implied by a uDAG are identical to
/// the faithful reading (verified exhaustively against the brute-force
/// oracle); only five-node structures need the restricted certificates.
pub(crate) const FAITHFUL_ROW_MAX: usize = 4;

/// Full fast-rule statement set for one uDAG: rules 1-2 plus the PAG-level
/// non-causes, closed under the causal logic. Queries are read faithfully
/// up to [`FAITHFUL_ROW_MAX`] nodes and through the Lemma-3/4 certificates
/// above that. This is what a mapping-table row stores.
///
/// Certificates are pooled across the whole Markov equivalence class: the
/// set of MAGs a uDAG optimally approximates is a class-level object, so a
/// dependence certified in any equivalent orientation holds for all of
/// them. Rows therefore agree across class members.
pub(crate) fn fast_row(tables: &LevelTables, index: usize) -> BTreeSet<CausalStatement> {
    let n = tables.n;
    let class = &tables.classes[tables.class_of[index] as usize];
    let pag = &class.pag;
    if n <= FAITHFUL_ROW_MAX {
        let fp = &tables.fingerprints[index];
        let query = |x: usize, y: usize, z: NodeMask| {
            if fp.separated(x, y, z) {
                CiStatus::Independent
            } else {
                CiStatus::Dependent
            }
        };
        derive_statements(n, &query, pag)
    } else {
        let members: Vec<&Dag> = class.members.iter().map(|&i| &tables.dags[i as usize]).collect();
        let fp = &class.fingerprint;
        let query = |x: usize, y: usize, z: NodeMask| {
            if fp.separated(x, y, z) {
                CiStatus::Independent
            } else if members.iter().any(|g| certified_status(g, x, y, z) == CiStatus::Dependent) {
                CiStatus::Dependent
            } else {
                CiStatus::Unknown
            }
        };
        derive_statements(n, &query, pag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_is_a_certified_dependence() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        assert_eq!(udag_ci_query(&g, 0, 1, &[]).unwrap(), CiStatus::Dependent);
    }

    #[test]
    fn chain_certifies_independence_given_middle() {
        let g = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(udag_ci_query(&g, 0, 1, &[2]).unwrap(), CiStatus::Independent);
        // marginal dependence through the chain: certified by uniqueness,
        // not by edge removal.
        assert_eq!(udag_ci_query(&g, 0, 1, &[]).unwrap(), CiStatus::Unknown);
        assert_eq!(udag_unique_path_query(&g, 0, 1, &[]).unwrap(), CiStatus::Dependent);
    }

    #[test]
    fn parallel_paths_are_not_unique() {
        // 0 -> 1 direct plus 0 -> 2 -> 1
        let g = Dag::new(3, &[(0, 1), (0, 2), (2, 1)]).unwrap();
        assert_eq!(udag_unique_path_query(&g, 0, 1, &[]).unwrap(), CiStatus::Unknown);
    }

    #[test]
    fn v_structure_noncauses() {
        let g = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let nc = noncause_statements_from_optimal_udag(&g).unwrap();
        assert!(nc.contains(&CausalStatement::non_cause(2, 0)));
        assert!(nc.contains(&CausalStatement::non_cause(2, 1)));
    }

    #[test]
    fn single_edge_class_has_no_noncauses() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        assert!(noncause_statements_from_optimal_udag(&g).unwrap().is_empty());
    }
}
