//! Graph structures (DAG, MAG, PAG), separation criteria, latent projection,
//! equivalence classes and enumeration.
//!
//! Node identity is a dense integer id `0..n` within any structure; name <->
//! id tables live at module boundaries (cli, search), never in here. All
//! types are immutable after construction and all operations are pure.

mod dag;
mod enumerate;
mod fingerprint;
mod mag;
mod pag;
mod project;
mod separation;
pub mod text;

pub use dag::{d_separated, Dag};
pub use enumerate::{canonical_code, enumerate_dags, MAX_ENUM_NODES};
pub use fingerprint::{independence_fingerprint, markov_equivalent, CiStatement, Fingerprint};
pub use mag::{m_separated, Mag};
pub use pag::{pag_of, potentially_directed_path, Mark, Pag};
pub use project::latent_project;

pub(crate) use enumerate::{LevelTables, CANONICAL_ORDER_VERSION};
pub(crate) use fingerprint::fingerprint_of;
pub(crate) use project::subsets_of;
pub(crate) use separation::{m_connecting_paths, m_separated_masks};

/// Number of m-connecting simple paths between `x` and `y` given `z`,
/// counted up to `limit` (uniqueness checks need at most 2).
pub fn connecting_path_count(mag: &Mag, x: usize, y: usize, z: &[usize], limit: usize) -> Result<usize> {
    let zmask = mask_of(z);
    check_query(mag.node_count(), x, y, zmask)?;
    Ok(m_connecting_paths(mag, x, y, zmask, limit).len())
}

use crate::error::{invalid, Result};

/// Bitmask over node ids; structures in this crate never exceed 32 nodes.
pub(crate) type NodeMask = u32;

pub(crate) fn mask_of(nodes: &[usize]) -> NodeMask {
    nodes.iter().fold(0, |m, &v| m | (1 << v))
}

pub(crate) fn mask_to_vec(mask: NodeMask) -> Vec<usize> {
    (0..u32::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Validates a separation query `(x, y, z)` against a node count.
pub(crate) fn check_query(n: usize, x: usize, y: usize, z: NodeMask) -> Result<()> {
    if x >= n || y >= n {
        return Err(invalid(format!("node id out of range (n = {n})")));
    }
    if x == y {
        return Err(invalid("x and y must be distinct"));
    }
    if z >> n != 0 {
        return Err(invalid(format!("conditioning set contains id >= {n}")));
    }
    if z & (1 << x) != 0 || z & (1 << y) != 0 {
        return Err(invalid("conditioning set must not contain x or y"));
    }
    Ok(())
}

/// Either kind of separation-capable structure; used by operations that are
/// defined uniformly over DAGs and MAGs.
#[derive(Debug, Clone)]
pub enum Structure {
    Dag(Dag),
    Mag(Mag),
}

impl Structure {
    pub fn node_count(&self) -> usize {
        match self {
            Structure::Dag(g) => g.node_count(),
            Structure::Mag(m) => m.node_count(),
        }
    }

    pub(crate) fn separated_masks(&self, x: usize, y: usize, z: NodeMask) -> bool {
        match self {
            Structure::Dag(g) => g.d_separated_masks(x, y, z),
            Structure::Mag(m) => m_separated_masks(m, x, y, z),
        }
    }

    /// Reflexive-transitive ancestor set of `x` over directed edges.
    pub fn ancestors(&self, x: usize) -> Result<Vec<usize>> {
        let n = self.node_count();
        if x >= n {
            return Err(invalid(format!("node id {x} out of range (n = {n})")));
        }
        let mask = match self {
            Structure::Dag(g) => g.ancestor_mask(1 << x),
            Structure::Mag(m) => m.ancestor_mask(1 << x),
        };
        Ok(mask_to_vec(mask))
    }
}

impl From<Dag> for Structure {
    fn from(g: Dag) -> Self {
        Structure::Dag(g)
    }
}

impl From<Mag> for Structure {
    fn from(m: Mag) -> Self {
        Structure::Mag(m)
    }
}

/// Reflexive-transitive closure over directed edges, as a node set.
pub fn ancestors(g: impl Into<Structure>, x: usize) -> Result<Vec<usize>> {
    g.into().ancestors(x)
}
