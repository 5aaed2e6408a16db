//! The precomputed structure-to-statement mapping: for every level n and
//! every canonical DAG on n nodes, the causal statements its row entails
//! when that DAG is the optimal uDAG over a scored variable subset.
//!
//! Rows are produced by the fast uDAG rules; the brute-force oracle in
//! `oracle.rs` is the independent correctness reference the test suite
//! compares against.

use super::udag::fast_row;
use super::CausalStatement;
use crate::error::{capacity, BccdError, Result};
use crate::graphs::{LevelTables, CANONICAL_ORDER_VERSION, MAX_ENUM_NODES};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

/// Version of the rule set; bumped when row contents would change.
pub(crate) const RULE_VERSION: u16 = 1;

/// Combined cache version: canonical enumeration order in the high half,
/// rule version in the low half.
pub const MAPPING_VERSION: u32 = ((CANONICAL_ORDER_VERSION as u32) << 16) | RULE_VERSION as u32;

const MAGIC: &[u8; 8] = b"BCCDMAP1";

/// Statement rows per level, indexed by canonical DAG order.
#[derive(Debug)]
pub struct MappingTable {
    pub k_max: usize,
    /// levels[n - 1][dag_index] = canonically sorted statements
    levels: Vec<Vec<Vec<CausalStatement>>>,
}

impl MappingTable {
    /// Builds rows for every level up to `k_max` with the fast uDAG rules.
    pub fn build(k_max: usize) -> Result<MappingTable> {
        if k_max == 0 || k_max > MAX_ENUM_NODES {
            return Err(capacity(format!("k_max must be in 1..={MAX_ENUM_NODES}, got {k_max}")));
        }
        let mut levels = Vec::with_capacity(k_max);
        for n in 1..=k_max {
            let tables = LevelTables::get(n)?;
            let rows: Vec<Vec<CausalStatement>> = (0..tables.dag_count())
                .into_par_iter()
                .map(|i| fast_row(tables, i).into_iter().collect())
                .collect();
            levels.push(rows);
        }
        Ok(MappingTable { k_max, levels })
    }

    pub fn row(&self, level: usize, dag_index: usize) -> &[CausalStatement] {
        &self.levels[level - 1][dag_index]
    }

    pub fn rows_at(&self, level: usize) -> &[Vec<CausalStatement>] {
        &self.levels[level - 1]
    }

    pub fn row_count(&self, level: usize) -> usize {
        self.levels[level - 1].len()
    }

    pub fn row_set(&self, level: usize, dag_index: usize) -> BTreeSet<CausalStatement> {
        self.row(level, dag_index).iter().copied().collect()
    }

    /// Little-endian binary serialization:
    /// magic "BCCDMAP1", version u32, k_max u8, then per level:
    /// row count u32, per row: statement count u16, per statement:
    /// kind u8 + three variable slots u8 (unused = 0xFF).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&MAPPING_VERSION.to_le_bytes());
        out.push(self.k_max as u8);
        for level in &self.levels {
            out.extend_from_slice(&(level.len() as u32).to_le_bytes());
            for row in level {
                out.extend_from_slice(&(row.len() as u16).to_le_bytes());
                for s in row {
                    out.extend_from_slice(&s.encode());
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<MappingTable> {
        let mut cur = std::io::Cursor::new(bytes);
        let mut magic = [0u8; 8];
        cur.read_exact(&mut magic).map_err(|_| truncated())?;
        if &magic != MAGIC {
            return Err(BccdError::Parse { line: 0, msg: "bad mapping magic".into() });
        }
        let mut version = [0u8; 4];
        cur.read_exact(&mut version).map_err(|_| truncated())?;
        let version = u32::from_le_bytes(version);
        if version != MAPPING_VERSION {
            return Err(BccdError::VersionMismatch { expected: MAPPING_VERSION, found: version });
        }
        let mut k_max = [0u8; 1];
        cur.read_exact(&mut k_max).map_err(|_| truncated())?;
        let k_max = k_max[0] as usize;
        if k_max == 0 || k_max > MAX_ENUM_NODES {
            return Err(BccdError::Parse { line: 0, msg: format!("bad k_max {k_max}") });
        }
        let mut levels = Vec::with_capacity(k_max);
        for n in 1..=k_max {
            let mut count = [0u8; 4];
            cur.read_exact(&mut count).map_err(|_| truncated())?;
            let count = u32::from_le_bytes(count) as usize;
            let expected = LevelTables::get(n)?.dag_count();
            if count != expected {
                return Err(BccdError::Parse {
                    line: 0,
                    msg: format!("level {n}: {count} rows, expected {expected}"),
                });
            }
            let mut rows = Vec::with_capacity(count);
            for _ in 0..count {
                let mut stc = [0u8; 2];
                cur.read_exact(&mut stc).map_err(|_| truncated())?;
                let stc = u16::from_le_bytes(stc) as usize;
                let mut row = Vec::with_capacity(stc);
                for _ in 0..stc {
                    let mut enc = [0u8; 4];
                    cur.read_exact(&mut enc).map_err(|_| truncated())?;
                    let s = CausalStatement::decode(enc).ok_or_else(|| BccdError::Parse {
                        line: 0,
                        msg: format!("bad statement encoding {enc:?}"),
                    })?;
                    if s.vars().iter().any(|&v| v as usize >= n) {
                        return Err(BccdError::Parse {
                            line: 0,
                            msg: format!("statement names a slot outside level {n}"),
                        });
                    }
                    row.push(s);
                }
                rows.push(row);
            }
            levels.push(rows);
        }
        if cur.position() != bytes.len() as u64 {
            return Err(BccdError::Parse { line: 0, msg: "trailing bytes in mapping cache".into() });
        }
        Ok(MappingTable { k_max, levels })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MappingTable> {
        let bytes = std::fs::read(path)?;
        Self::from_bytes(&bytes)
    }

    /// Human-readable dump mirroring the binary format, for inspection.
    pub fn dump_text(&self) -> String {
        let mut out = format!("mapping version {MAPPING_VERSION:#x} k_max {}\n", self.k_max);
        for n in 1..=self.k_max {
            out.push_str(&format!("level {n}: {} rows\n", self.row_count(n)));
            for (i, row) in self.rows_at(n).iter().enumerate() {
                if row.is_empty() {
                    continue;
                }
                let name = |v: u16| format!("V{v}");
                let rendered: Vec<String> = row.iter().map(|s| s.render(&name)).collect();
                out.push_str(&format!("  dag {i}: {}\n", rendered.join("; ")));
            }
        }
        out
    }

    /// Per-level row-count summary (for the CLI build command).
    pub fn summary(&self) -> String {
        (1..=self.k_max)
            .map(|n| format!("level {n}: {} rows", self.row_count(n)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn truncated() -> BccdError {
    BccdError::Parse { line: 0, msg: "truncated mapping cache".into() }
}

/// Builds the mapping to `k_max` (precomputation entry point).
pub fn build_mapping(k_max: usize) -> Result<MappingTable> {
    MappingTable::build(k_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_2_rows() {
        let t = build_mapping(2).unwrap();
        assert_eq!(t.row_count(1), 1);
        assert_eq!(t.row_count(2), 3);
        // the edgeless DAG row: non-adjacency plus both non-causes
        let tables = LevelTables::get(2).unwrap();
        let edgeless = tables.dags.iter().position(|g| g.edge_count() == 0).unwrap();
        assert_eq!(
            t.row_set(2, edgeless),
            BTreeSet::from([
                CausalStatement::non_adjacent(0, 1),
                CausalStatement::non_cause(0, 1),
                CausalStatement::non_cause(1, 0),
            ])
        );
        // single-edge rows are empty (both orientations in the class)
        for (i, g) in tables.dags.iter().enumerate() {
            if g.edge_count() == 1 {
                assert!(t.row(2, i).is_empty());
            }
        }
    }

    #[test]
    fn serialization_roundtrip_and_versioning() {
        let t = build_mapping(3).unwrap();
        let bytes = t.to_bytes();
        let t2 = MappingTable::from_bytes(&bytes).unwrap();
        assert_eq!(t2.to_bytes(), bytes);
        for n in 1..=3 {
            for i in 0..t.row_count(n) {
                assert_eq!(t.row(n, i), t2.row(n, i));
            }
        }
        // version mismatch is detected
        let mut tampered = bytes.clone();
        tampered[8] ^= 0xFF;
        match MappingTable::from_bytes(&tampered) {
            Err(BccdError::VersionMismatch { .. }) => {}
            other => panic!("expected version mismatch, got {other:?}"),
        }
    }

    #[test]
    fn rebuilds_are_byte_identical() {
        let a = build_mapping(3).unwrap().to_bytes();
        let b = build_mapping(3).unwrap().to_bytes();
        assert_eq!(a, b);
    }

    #[test]
    fn no_statement_names_an_outside_slot() {
        let t = build_mapping(3).unwrap();
        for n in 1..=3 {
            for row in t.rows_at(n) {
                for s in row {
                    assert!(s.vars().iter().all(|&v| (v as usize) < n));
                }
            }
        }
    }
}
