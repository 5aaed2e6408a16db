use super::{mask_to_vec, NodeMask, Structure};
use crate::error::{capacity, invalid, Result};

/// Upper node-count bound for exhaustive CI fingerprinting; the statement
/// space is pairs(n) * 2^(n-2) entries, 240 at n = 6.
pub(crate) const MAX_FINGERPRINT_NODES: usize = 6;

/// A conditional-independence statement `x _||_ y | z` (or its negation).
/// Canonical form has `x < y`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CiStatement {
    pub x: usize,
    pub y: usize,
    pub z: Vec<usize>,
    pub independent: bool,
}

/// The complete set of separation statements of a structure on up to
/// [`MAX_FINGERPRINT_NODES`] nodes, packed as a bitset: bit set means
/// "separated". Two structures are Markov equivalent iff their fingerprints
/// are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    n: usize,
    bits: [u64; 4],
}

impl Fingerprint {
    pub(crate) fn empty(n: usize) -> Self {
        Fingerprint { n, bits: [0; 4] }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Index of the statement (x, y, z) with x < y: statements are grouped
    /// by pair in lexicographic order; within a pair, the conditioning set
    /// is encoded by packing the membership bits of the other n-2 nodes in
    /// ascending node order.
    #[inline]
    pub(crate) fn index(n: usize, x: usize, y: usize, z: NodeMask) -> usize {
        debug_assert!(x < y && y < n);
        debug_assert!(z & (1 << x) == 0 && z & (1 << y) == 0);
        // rank of pair (x, y) among pairs in lexicographic order
        let pair = x * (2 * n - x - 1) / 2 + (y - x - 1);
        let mut sub = 0usize;
        let mut bit = 0;
        for v in 0..n {
            if v == x || v == y {
                continue;
            }
            if z & (1 << v) != 0 {
                sub |= 1 << bit;
            }
            bit += 1;
        }
        (pair << (n - 2)) | sub
    }

    #[inline]
    pub(crate) fn set(&mut self, idx: usize) {
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    #[inline]
    pub(crate) fn get(&self, idx: usize) -> bool {
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Whether (x, y) are separated given z; x and y in either order.
    #[inline]
    pub fn separated(&self, x: usize, y: usize, z: NodeMask) -> bool {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        self.get(Self::index(self.n, x, y, z))
    }

    /// Whether every separation of `self` also holds in `other`.
    #[inline]
    pub fn subset_of(&self, other: &Fingerprint) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Whether some conditioning set separates the pair.
    pub fn pair_separable(&self, x: usize, y: usize) -> bool {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        (0..1u32 << self.n)
            .filter(|z| z & (1 << x) == 0 && z & (1 << y) == 0)
            .any(|z| self.get(Self::index(self.n, x, y, z)))
    }

    /// Expands to the explicit statement list (independent = true entries
    /// only), in canonical order.
    pub fn statements(&self) -> Vec<CiStatement> {
        let n = self.n;
        let mut out = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                for z in 0..(1u32 << n) {
                    if z & (1 << x) != 0 || z & (1 << y) != 0 {
                        continue;
                    }
                    if self.get(Self::index(n, x, y, z)) {
                        out.push(CiStatement { x, y, z: mask_to_vec(z), independent: true });
                    }
                }
            }
        }
        out
    }

    /// Restriction to a node subset, relabeled to dense ids in ascending
    /// order of the original ids.
    pub(crate) fn restrict(&self, keep: NodeMask) -> Fingerprint {
        let nodes = mask_to_vec(keep);
        let m = nodes.len();
        let mut out = Fingerprint::empty(m);
        for xi in 0..m {
            for yi in (xi + 1)..m {
                for zsub in 0..(1u32 << m) {
                    if zsub & (1 << xi) != 0 || zsub & (1 << yi) != 0 {
                        continue;
                    }
                    let z_orig =
                        (0..m).filter(|&k| zsub & (1 << k) != 0).fold(0, |acc, k| acc | (1 << nodes[k]));
                    if self.separated(nodes[xi], nodes[yi], z_orig) {
                        out.set(Fingerprint::index(m, xi, yi, zsub));
                    }
                }
            }
        }
        out
    }

    /// Image under a node relabeling `perm` (node i becomes perm[i]).
    pub(crate) fn permute(&self, perm: &[usize]) -> Fingerprint {
        let n = self.n;
        let mut out = Fingerprint::empty(n);
        for x in 0..n {
            for y in (x + 1)..n {
                for z in 0..(1u32 << n) {
                    if z & (1 << x) != 0 || z & (1 << y) != 0 {
                        continue;
                    }
                    if !self.get(Self::index(n, x, y, z)) {
                        continue;
                    }
                    let (px, py) = (perm[x], perm[y]);
                    let (px, py) = if px < py { (px, py) } else { (py, px) };
                    let pz = (0..n).filter(|&v| z & (1 << v) != 0).fold(0, |acc, v| acc | (1 << perm[v]));
                    out.set(Fingerprint::index(n, px, py, pz));
                }
            }
        }
        out
    }
}

pub(crate) fn fingerprint_of(s: &Structure) -> Result<Fingerprint> {
    let n = s.node_count();
    if n > MAX_FINGERPRINT_NODES {
        return Err(capacity(format!(
            "fingerprints are limited to {MAX_FINGERPRINT_NODES} nodes, got {n}"
        )));
    }
    let mut fp = Fingerprint::empty(n);
    for x in 0..n {
        for y in (x + 1)..n {
            for z in 0..(1u32 << n) {
                if z & (1 << x) != 0 || z & (1 << y) != 0 {
                    continue;
                }
                if s.separated_masks(x, y, z) {
                    fp.set(Fingerprint::index(n, x, y, z));
                }
            }
        }
    }
    Ok(fp)
}

/// All CI statements that hold in the structure by d-/m-separation, over
/// all pairs and all conditioning subsets, in canonical order.
pub fn independence_fingerprint(g: impl Into<Structure>) -> Result<Fingerprint> {
    fingerprint_of(&g.into())
}

/// Markov equivalence: identical independence fingerprints.
pub fn markov_equivalent(g1: impl Into<Structure>, g2: impl Into<Structure>) -> Result<bool> {
    let (a, b) = (g1.into(), g2.into());
    if a.node_count() != b.node_count() {
        return Err(invalid("markov_equivalent needs equal node counts"));
    }
    Ok(fingerprint_of(&a)? == fingerprint_of(&b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Dag, Mag};

    #[test]
    fn empty_graph_on_two_nodes_has_single_independence() {
        let g = Dag::new(2, &[]).unwrap();
        let fp = independence_fingerprint(g).unwrap();
        let st = fp.statements();
        assert_eq!(st.len(), 1);
        assert_eq!(st[0], CiStatement { x: 0, y: 1, z: vec![], independent: true });
    }

    #[test]
    fn single_edge_has_no_independencies() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        assert!(independence_fingerprint(g).unwrap().statements().is_empty());
    }

    #[test]
    fn chain_fork_equivalent_collider_not() {
        let chain = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        let fork = Dag::new(3, &[(2, 0), (2, 1)]).unwrap();
        let collider = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let chain2 = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        let fwd = Dag::new(2, &[(0, 1)]).unwrap();
        let bwd = Dag::new(2, &[(1, 0)]).unwrap();
        assert!(markov_equivalent(chain.clone(), fork).unwrap());
        assert!(!markov_equivalent(chain2, collider).unwrap());
        assert!(markov_equivalent(fwd, bwd).unwrap());
    }

    #[test]
    fn three_node_dags_partition_into_eleven_classes() {
        // independent oracle for the number of 3-node Markov equivalence
        // classes: group all 25 DAGs by fingerprint.
        let mut classes = std::collections::HashSet::new();
        for g in crate::graphs::enumerate_dags(3).unwrap() {
            classes.insert(independence_fingerprint(g).unwrap());
        }
        assert_eq!(classes.len(), 11);
    }

    #[test]
    fn dag_and_its_mag_view_share_fingerprints() {
        for g in crate::graphs::enumerate_dags(4).unwrap() {
            let m = Mag::from(&g);
            assert_eq!(
                independence_fingerprint(g.clone()).unwrap(),
                independence_fingerprint(m).unwrap(),
                "{g:?}"
            );
        }
    }

    #[test]
    fn restriction_drops_outside_statements() {
        let g = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        let fp = independence_fingerprint(g).unwrap();
        // restrict to {0, 1}: marginally dependent through the chain.
        let r = fp.restrict(0b011);
        assert!(!r.separated(0, 1, 0));
    }
}
