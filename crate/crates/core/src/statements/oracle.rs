//! The correctness oracle for the fast mapping rules: exhaustive
//! enumeration of all MAGs over a node set, grouped into Markov equivalence
//! classes, with the statement set identifiable from each class and the set
//! of minimum-parameter DAG approximations to it.

use super::engine::{derive_statements, CiStatus};
use super::CausalStatement;
use crate::error::{capacity, invalid, Result};
use crate::graphs::{
    fingerprint_of, Dag, Fingerprint, LevelTables, Mag, Mark, NodeMask, Pag, Structure,
    MAX_ENUM_NODES,
};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// One Markov equivalence class of MAGs.
pub(crate) struct MagClass {
    pub fingerprint: Fingerprint,
    pub pag: Pag,
    pub member_count: u64,
    /// ids of the minimum-parameter DAG classes approximating this class
    pub optimal_dag_classes: Vec<u32>,
    /// statements identifiable from the class (rules 1-2 + PAG non-causes,
    /// closed)
    pub statements: BTreeSet<CausalStatement>,
}

pub(crate) struct MagClassTable {
    pub n: usize,
    pub classes: Vec<MagClass>,
    /// for each DAG class id, the MAG classes it optimally approximates
    pub kept_by_dag_class: Vec<Vec<u32>>,
}

static MAG_TABLES: [OnceLock<MagClassTable>; MAX_ENUM_NODES + 1] =
    [const { OnceLock::new() }; MAX_ENUM_NODES + 1];

/// Lattice cell for intersecting endpoint marks across class members.
#[derive(Clone, Copy, PartialEq)]
enum MarkMeet {
    Unseen,
    Exactly(Mark),
    Conflicting,
}

impl MarkMeet {
    fn meet(self, m: Mark) -> MarkMeet {
        match self {
            MarkMeet::Unseen => MarkMeet::Exactly(m),
            MarkMeet::Exactly(prev) if prev == m => self,
            _ => MarkMeet::Conflicting,
        }
    }
}

struct ClassAccum {
    fingerprint: Fingerprint,
    marks: Vec<MarkMeet>,
    count: u64,
}

impl MagClassTable {
    pub fn get(n: usize) -> Result<&'static MagClassTable> {
        if n == 0 || n > MAX_ENUM_NODES {
            return Err(capacity(format!(
                "MAG enumeration supports 1..={MAX_ENUM_NODES} nodes, got {n}"
            )));
        }
        Ok(MAG_TABLES[n].get_or_init(|| Self::build(n)))
    }

    fn build(n: usize) -> MagClassTable {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        let total: u64 = 4u64.pow(pairs.len() as u32);
        let chunk = 1u64 << 12;
        let chunk_count = total.div_ceil(chunk);

        // enumerate all edge-state assignments in parallel chunks, keep
        // ancestral + maximal graphs, accumulate per-fingerprint classes
        let maps: Vec<std::collections::HashMap<Fingerprint, ClassAccum>> = (0..chunk_count)
            .into_par_iter()
            .map(|ci| {
                let mut local: std::collections::HashMap<Fingerprint, ClassAccum> = Default::default();
                let start = ci * chunk;
                let end = (start + chunk).min(total);
                for code in start..end {
                    if let Some(mag) = decode_mag(n, &pairs, code) {
                        let fp = fingerprint_of(&Structure::Mag(mag.clone())).expect("n <= 5");
                        if !is_maximal(&mag, &fp) {
                            continue;
                        }
                        let acc = local.entry(fp).or_insert_with(|| ClassAccum {
                            fingerprint: fp,
                            marks: vec![MarkMeet::Unseen; n * n],
                            count: 0,
                        });
                        acc.count += 1;
                        for i in 0..n {
                            for j in 0..n {
                                if i == j {
                                    continue;
                                }
                                if let Some(m) = mag.mark_at(i, j) {
                                    acc.marks[i * n + j] = acc.marks[i * n + j].meet(m);
                                }
                            }
                        }
                    }
                }
                local
            })
            .collect();

        let mut merged: std::collections::HashMap<Fingerprint, ClassAccum> = Default::default();
        for map in maps {
            for (fp, acc) in map {
                match merged.entry(fp) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(acc);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let cur = e.get_mut();
                        cur.count += acc.count;
                        for (cell, incoming) in cur.marks.iter_mut().zip(acc.marks) {
                            *cell = match (*cell, incoming) {
                                (MarkMeet::Unseen, other) => other,
                                (mine, MarkMeet::Unseen) => mine,
                                (MarkMeet::Exactly(a), MarkMeet::Exactly(b)) if a == b => {
                                    MarkMeet::Exactly(a)
                                }
                                _ => MarkMeet::Conflicting,
                            };
                        }
                    }
                }
            }
        }

        // deterministic class order
        let mut accs: Vec<ClassAccum> = merged.into_values().collect();
        accs.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));

        let dag_tables = LevelTables::get(n).expect("n <= 5");
        let classes: Vec<MagClass> = accs
            .par_iter()
            .map(|acc| {
                let mut pag = Pag::empty(n).expect("n <= 5");
                for i in 0..n {
                    for j in (i + 1)..n {
                        let at_j = acc.marks[i * n + j];
                        let at_i = acc.marks[j * n + i];
                        match (at_i, at_j) {
                            (MarkMeet::Unseen, MarkMeet::Unseen) => {}
                            (a, b) => {
                                let to_mark = |m: MarkMeet| match m {
                                    MarkMeet::Exactly(mark) => mark,
                                    _ => Mark::Circle,
                                };
                                pag.set_edge(i, j, to_mark(a), to_mark(b)).expect("valid ids");
                            }
                        }
                    }
                }
                let optimal_dag_classes = optimal_dag_classes_for(dag_tables, &acc.fingerprint);
                let fp = acc.fingerprint;
                let query =
                    |x: usize, y: usize, z: NodeMask| -> CiStatus {
                        if fp.separated(x, y, z) {
                            CiStatus::Independent
                        } else {
                            CiStatus::Dependent
                        }
                    };
                let statements = derive_statements(n, &query, &pag);
                MagClass {
                    fingerprint: fp,
                    pag,
                    member_count: acc.count,
                    optimal_dag_classes,
                    statements,
                }
            })
            .collect();

        let mut kept_by_dag_class = vec![Vec::new(); dag_tables.classes.len()];
        for (mc_id, mc) in classes.iter().enumerate() {
            for &dc in &mc.optimal_dag_classes {
                kept_by_dag_class[dc as usize].push(mc_id as u32);
            }
        }
        MagClassTable { n, classes, kept_by_dag_class }
    }
}

/// Decodes one base-4 edge-state assignment into a MAG if it is ancestral.
/// States per pair (a < b): 0 none, 1 a -> b, 2 b -> a, 3 a <-> b.
fn decode_mag(n: usize, pairs: &[(usize, usize)], code: u64) -> Option<Mag> {
    let mut parents = vec![0 as NodeMask; n];
    let mut spouses = vec![0 as NodeMask; n];
    let mut c = code;
    for &(a, b) in pairs {
        match c & 3 {
            1 => parents[b] |= 1 << a,
            2 => parents[a] |= 1 << b,
            3 => {
                spouses[a] |= 1 << b;
                spouses[b] |= 1 << a;
            }
            _ => {}
        }
        c >>= 2;
    }
    let mag = Mag::from_masks_unchecked(parents, spouses);
    mag.is_ancestral().then_some(mag)
}

/// A MAG is maximal iff every non-adjacent pair has a separating set.
fn is_maximal(mag: &Mag, fp: &Fingerprint) -> bool {
    let n = mag.node_count();
    for a in 0..n {
        for b in (a + 1)..n {
            if !mag.adjacent(a, b) && !fp.pair_separable(a, b) {
                return false;
            }
        }
    }
    true
}

/// Minimum-parameter DAG classes whose independencies are a subset of the
/// MAG class's (every distribution faithful to the MAG factorizes over
/// such DAGs; the optimal ones add the fewest free parameters).
fn optimal_dag_classes_for(tables: &LevelTables, fp: &Fingerprint) -> Vec<u32> {
    let mut best = u32::MAX;
    let mut out: Vec<u32> = Vec::new();
    for (c, class) in tables.classes.iter().enumerate() {
        if class.fingerprint.subset_of(fp) {
            match class.param_count.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = class.param_count;
                    out.clear();
                    out.push(c as u32);
                }
                std::cmp::Ordering::Equal => out.push(c as u32),
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    out
}

/// Statements identifiable from a structure treated as faithful: rules 1-2
/// on its separation fingerprint, non-adjacency for separable pairs,
/// absent causal relations from its Markov equivalence class (over MAGs),
/// closed under the causal logic.
pub fn statements_from_faithful_structure(
    g: impl Into<Structure>,
) -> Result<BTreeSet<CausalStatement>> {
    let s = g.into();
    let n = s.node_count();
    if n > MAX_ENUM_NODES {
        return Err(capacity(format!(
            "faithful statement extraction is limited to {MAX_ENUM_NODES} nodes, got {n}"
        )));
    }
    let fp = fingerprint_of(&s)?;
    let table = MagClassTable::get(n)?;
    let class = table
        .classes
        .iter()
        .find(|c| c.fingerprint == fp)
        .ok_or_else(|| invalid("structure has no MAG equivalence class (not ancestral?)"))?;
    Ok(class.statements.clone())
}

/// All DAGs that optimally approximate the MAG: minimum-parameter DAGs
/// whose entailed independencies all hold in the MAG. Returned in canonical
/// enumeration order.
pub fn optimal_udags_of_mag(m: &Mag) -> Result<Vec<Dag>> {
    let n = m.node_count();
    if n > MAX_ENUM_NODES {
        return Err(capacity(format!(
            "optimal uDAG search is limited to {MAX_ENUM_NODES} nodes, got {n}"
        )));
    }
    let fp = fingerprint_of(&Structure::Mag(m.clone()))?;
    let tables = LevelTables::get(n)?;
    let class_ids = optimal_dag_classes_for(tables, &fp);
    let mut indices: Vec<u32> = class_ids
        .iter()
        .flat_map(|&c| tables.classes[c as usize].members.iter().copied())
        .collect();
    indices.sort_unstable();
    Ok(indices.into_iter().map(|i| tables.dags[i as usize].clone()).collect())
}

/// The brute-force oracle row for a uDAG: the intersection of the
/// statements identifiable from every MAG that has `g` among its optimal
/// uDAG approximations.
pub fn bruteforce_statements(g: &Dag) -> Result<BTreeSet<CausalStatement>> {
    let n = g.node_count();
    if n > MAX_ENUM_NODES {
        return Err(capacity(format!(
            "the brute-force oracle is limited to {MAX_ENUM_NODES} nodes, got {n}"
        )));
    }
    let tables = LevelTables::get(n)?;
    let idx = tables
        .index_of(g)
        .ok_or_else(|| crate::error::BccdError::Invariant("graph missing from enumeration".into()))?;
    let dag_class = tables.class_of[idx] as usize;
    let mag_table = MagClassTable::get(n)?;
    let kept = &mag_table.kept_by_dag_class[dag_class];
    let mut iter = kept.iter();
    let first = match iter.next() {
        Some(&mc) => mag_table.classes[mc as usize].statements.clone(),
        None => return Ok(BTreeSet::new()),
    };
    Ok(iter.fold(first, |acc, &mc| {
        acc.intersection(&mag_table.classes[mc as usize].statements).cloned().collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faithful_collider_statements() {
        let g = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let st = statements_from_faithful_structure(g).unwrap();
        assert!(st.contains(&CausalStatement::non_adjacent(0, 1)));
        assert!(st.contains(&CausalStatement::non_cause(2, 0)));
        assert!(st.contains(&CausalStatement::non_cause(2, 1)));
    }

    #[test]
    fn faithful_single_edge_has_no_statements() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        assert!(statements_from_faithful_structure(g).unwrap().is_empty());
    }

    #[test]
    fn optimal_udags_of_a_dag_are_its_equivalence_class() {
        // chain 0 -> 2 -> 1 as a MAG: optimal uDAGs are the three members
        // of its class (chain, reversed chain, fork).
        let g = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        let m = Mag::from(&g);
        let udags = optimal_udags_of_mag(&m).unwrap();
        assert_eq!(udags.len(), 3);
        for u in &udags {
            assert!(crate::graphs::markov_equivalent(u.clone(), g.clone()).unwrap());
        }
    }

    #[test]
    fn optimal_udags_of_a_confounded_pair() {
        let m = Mag::new(2, &[], &[(0, 1)]).unwrap();
        let udags = optimal_udags_of_mag(&m).unwrap();
        assert_eq!(udags.len(), 2);
        assert!(udags.iter().all(|g| g.edge_count() == 1));
    }

    #[test]
    fn bruteforce_on_the_edgeless_pair() {
        let g = Dag::new(2, &[]).unwrap();
        let row = bruteforce_statements(&g).unwrap();
        assert_eq!(
            row,
            BTreeSet::from([
                CausalStatement::non_adjacent(0, 1),
                CausalStatement::non_cause(0, 1),
                CausalStatement::non_cause(1, 0),
            ])
        );
    }

    #[test]
    fn bruteforce_on_a_single_edge_is_empty() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        assert!(bruteforce_statements(&g).unwrap().is_empty());
    }

    #[test]
    fn three_node_bruteforce_equals_faithful_reading() {
        // the mapping finding: through four nodes, treating uDAGs as
        // faithful gives identical statement sets.
        for g in crate::graphs::enumerate_dags(3).unwrap() {
            let brute = bruteforce_statements(&g).unwrap();
            let faithful = statements_from_faithful_structure(g.clone()).unwrap();
            assert_eq!(brute, faithful, "{g:?}");
        }
    }
}
