use super::fingerprint::{fingerprint_of, Fingerprint};
use super::pag::pag_of_mags;
use super::{Dag, Mag, NodeMask, Pag, Structure};
use crate::error::{capacity, Result};
use std::sync::OnceLock;

/// Enumeration (and therefore mapping-table row indexing) is capped at
/// 5-node structures.
pub const MAX_ENUM_NODES: usize = 5;

/// Version of the canonical enumeration order; embedded in mapping caches.
pub(crate) const CANONICAL_ORDER_VERSION: u16 = 1;

/// Canonical code of a DAG: the adjacency indicator A[i][j] = (i -> j),
/// flattened row-major with the diagonal skipped, read as a big-endian bit
/// string (the first flattened cell is the most significant bit).
/// Enumeration order is ascending canonical code, which equals
/// lexicographic order on the flattened indicator.
pub fn canonical_code(g: &Dag) -> u32 {
    let n = g.node_count();
    let mut code = 0u32;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            code = (code << 1) | u32::from(g.has_edge(i, j));
        }
    }
    code
}

fn dag_from_code(n: usize, code: u32) -> Option<Dag> {
    let cells = n * (n - 1);
    let mut parents = vec![0 as NodeMask; n];
    let mut bit = cells;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            bit -= 1;
            if code >> bit & 1 == 1 {
                parents[j] |= 1 << i;
            }
        }
    }
    Dag::masks_acyclic(&parents).then(|| Dag::from_parent_masks(parents))
}

/// Every labeled DAG on `n` nodes exactly once, in ascending canonical-code
/// order. `n = 1..=5` gives 1, 3, 25, 543, 29281 structures.
pub fn enumerate_dags(n: usize) -> Result<Vec<Dag>> {
    if n == 0 || n > MAX_ENUM_NODES {
        return Err(capacity(format!("enumerate_dags supports 1..={MAX_ENUM_NODES} nodes, got {n}")));
    }
    let cells = n * (n - 1);
    let mut out = Vec::new();
    for code in 0..(1u64 << cells) {
        if let Some(g) = dag_from_code(n, code as u32) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Number of free parameters of a binary-reference Bayesian network with
/// this structure: sum over nodes of 2^(parent count). Constant across a
/// Markov equivalence class (covered-edge reversals swap in-degrees).
pub(crate) fn binary_param_count(g: &Dag) -> u32 {
    (0..g.node_count()).map(|v| 1u32 << g.parent_mask(v).count_ones()).sum()
}

/// One Markov equivalence class of DAGs at a given level.
pub(crate) struct DagClass {
    pub fingerprint: Fingerprint,
    /// canonical indices of the member DAGs, ascending
    pub members: Vec<u32>,
    pub param_count: u32,
    pub pag: Pag,
}

/// Precomputed per-level structure tables: the canonical DAG list, each
/// DAG's fingerprint and class, and per-class data (PAG, parameter count).
/// Built lazily once per level and shared; everything here is immutable.
pub(crate) struct LevelTables {
    pub n: usize,
    pub dags: Vec<Dag>,
    pub fingerprints: Vec<Fingerprint>,
    pub class_of: Vec<u32>,
    pub classes: Vec<DagClass>,
}

static LEVELS: [OnceLock<LevelTables>; MAX_ENUM_NODES + 1] =
    [const { OnceLock::new() }; MAX_ENUM_NODES + 1];

impl LevelTables {
    pub fn get(n: usize) -> Result<&'static LevelTables> {
        if n == 0 || n > MAX_ENUM_NODES {
            return Err(capacity(format!("level tables support 1..={MAX_ENUM_NODES} nodes, got {n}")));
        }
        Ok(LEVELS[n].get_or_init(|| Self::build(n)))
    }

    fn build(n: usize) -> LevelTables {
        let dags = enumerate_dags(n).expect("validated n");
        let fingerprints: Vec<Fingerprint> = dags
            .iter()
            .map(|g| fingerprint_of(&Structure::Dag(g.clone())).expect("n <= 5"))
            .collect();
        let mut class_index: std::collections::HashMap<Fingerprint, u32> = Default::default();
        let mut class_members: Vec<Vec<u32>> = Vec::new();
        let mut class_of = vec![0u32; dags.len()];
        for (i, fp) in fingerprints.iter().enumerate() {
            let c = *class_index.entry(*fp).or_insert_with(|| {
                class_members.push(Vec::new());
                (class_members.len() - 1) as u32
            });
            class_members[c as usize].push(i as u32);
            class_of[i] = c;
        }
        let classes = class_members
            .into_iter()
            .map(|members| {
                let mags: Vec<Mag> = members.iter().map(|&i| Mag::from(&dags[i as usize])).collect();
                let pag = pag_of_mags(n, mags.iter()).expect("shared skeleton within a class");
                DagClass {
                    fingerprint: fingerprints[members[0] as usize],
                    param_count: binary_param_count(&dags[members[0] as usize]),
                    members,
                    pag,
                }
            })
            .collect();
        LevelTables { n, dags, fingerprints, class_of, classes }
    }

    pub fn dag_count(&self) -> usize {
        self.dags.len()
    }

    /// Canonical index of a DAG (its position in `dags`).
    pub fn index_of(&self, g: &Dag) -> Option<usize> {
        let code = canonical_code(g);
        self.dags.binary_search_by_key(&code, canonical_code).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Robinson's recurrence for the number of labeled DAGs:
    /// a(n) = sum_{k=1..n} (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k).
    fn robinson(n: usize) -> u64 {
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            (1..=k).fold(1, |acc, i| acc * (n - i + 1) / i)
        }
        let mut a = vec![1u64; n + 1];
        for m in 1..=n {
            let mut total: i128 = 0;
            for k in 1..=m {
                let term = (binom(m as u64, k as u64) as i128)
                    * (1i128 << (k * (m - k)))
                    * (a[m - k] as i128);
                total += if k % 2 == 1 { term } else { -term };
            }
            a[m] = total as u64;
        }
        a[n]
    }

    #[test]
    fn dag_counts_match_recurrence_oracle() {
        assert_eq!(robinson(1), 1);
        assert_eq!(robinson(2), 3);
        assert_eq!(robinson(3), 25);
        assert_eq!(robinson(4), 543);
        assert_eq!(robinson(5), 29281);
        for n in 1..=4 {
            assert_eq!(enumerate_dags(n).unwrap().len() as u64, robinson(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_strictly_ascending_and_duplicate_free() {
        for n in 1..=4 {
            let dags = enumerate_dags(n).unwrap();
            let codes: Vec<u32> = dags.iter().map(canonical_code).collect();
            assert!(codes.windows(2).all(|w| w[0] < w[1]), "n = {n}");
        }
    }

    #[test]
    fn out_of_range_is_capacity_error() {
        assert!(enumerate_dags(0).is_err());
        assert!(enumerate_dags(6).is_err());
    }

    #[test]
    fn index_of_roundtrips() {
        let t = LevelTables::get(3).unwrap();
        for (i, g) in t.dags.iter().enumerate() {
            assert_eq!(t.index_of(g), Some(i));
        }
    }

    #[test]
    fn class_param_counts_are_class_invariant() {
        let t = LevelTables::get(4).unwrap();
        for class in &t.classes {
            for &m in &class.members {
                assert_eq!(binary_param_count(&t.dags[m as usize]), class.param_count);
            }
        }
    }
}
