use super::{check_query, mask_to_vec, NodeMask};
use crate::error::{invalid, Result};

/// Directed acyclic graph over nodes `0..n`, stored as one parent bitmask
/// per node. Supports up to 32 nodes; mapping-level graphs use at most 5.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    n: usize,
    parents: Vec<NodeMask>,
}

impl std::fmt::Debug for Dag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dag(n={}; ", self.n)?;
        let mut first = true;
        for (a, b) in self.edges() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{a}->{b}")?;
            first = false;
        }
        write!(f, ")")
    }
}

impl Dag {
    /// Builds a DAG from directed edges `(parent, child)`.
    ///
    /// Rejects self-loops, twin edges on the same pair, and directed cycles.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > u32::BITS as usize {
            return Err(invalid(format!("node count {n} out of range 1..=32")));
        }
        let mut parents = vec![0 as NodeMask; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range (n = {n})")));
            }
            if a == b {
                return Err(invalid(format!("self-loop on node {a}")));
            }
            if parents[b] & (1 << a) != 0 || parents[a] & (1 << b) != 0 {
                return Err(invalid(format!("duplicate edge on pair ({a}, {b})")));
            }
            parents[b] |= 1 << a;
        }
        let g = Dag { n, parents };
        if !g.is_acyclic() {
            return Err(invalid("graph contains a directed cycle"));
        }
        Ok(g)
    }

    /// Builds from per-node parent masks without cycle checking.
    /// Caller must guarantee acyclicity.
    pub(crate) fn from_parent_masks(parents: Vec<NodeMask>) -> Self {
        Dag { n: parents.len(), parents }
    }

    /// Acyclicity check on raw parent masks (Kahn's algorithm).
    pub(crate) fn masks_acyclic(parents: &[NodeMask]) -> bool {
        let n = parents.len();
        let mut alive: NodeMask = if n == 32 { !0 } else { (1 << n) - 1 };
        loop {
            let mut removed = false;
            for v in 0..n {
                if alive & (1 << v) != 0 && parents[v] & alive == 0 {
                    alive &= !(1 << v);
                    removed = true;
                }
            }
            if alive == 0 {
                return true;
            }
            if !removed {
                return false;
            }
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn parent_mask(&self, v: usize) -> NodeMask {
        self.parents[v]
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.parents[b] & (1 << a) != 0
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn parents_of(&self, v: usize) -> Vec<usize> {
        mask_to_vec(self.parents[v])
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Edges `(parent, child)` in ascending lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.n {
            for b in 0..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Copy of the graph with the edge between `a` and `b` removed
    /// (either orientation), if present.
    pub fn without_pair(&self, a: usize, b: usize) -> Dag {
        let mut parents = self.parents.clone();
        parents[b] &= !(1 << a);
        parents[a] &= !(1 << b);
        Dag { n: self.n, parents }
    }

    pub(crate) fn is_acyclic(&self) -> bool {
        Self::masks_acyclic(&self.parents)
    }

    /// Nodes with a directed path into any node of `seeds`, including the
    /// seeds themselves (reflexive-transitive ancestors).
    pub(crate) fn ancestor_mask(&self, seeds: NodeMask) -> NodeMask {
        let mut acc = seeds;
        loop {
            let mut next = acc;
            for v in 0..self.n {
                if acc & (1 << v) != 0 {
                    next |= self.parents[v];
                }
            }
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    pub(crate) fn descendant_mask(&self, seeds: NodeMask) -> NodeMask {
        let mut acc = seeds;
        loop {
            let mut next = acc;
            for v in 0..self.n {
                if acc & !(1 << v) != 0 && self.parents[v] & acc != 0 {
                    next |= 1 << v;
                }
            }
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// A topological order (parents before children).
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n);
        let mut placed: NodeMask = 0;
        while order.len() < self.n {
            for v in 0..self.n {
                if placed & (1 << v) == 0 && self.parents[v] & !placed == 0 {
                    order.push(v);
                    placed |= 1 << v;
                }
            }
        }
        order
    }

    /// Standard d-separation via reachability ("Bayes ball"); linear in the
    /// number of (node, direction) states, so usable on simgen-sized graphs.
    ///
    /// `true` iff every path between `x` and `y` is blocked given `z`.
    pub fn d_separated(&self, x: usize, y: usize, z: &[usize]) -> Result<bool> {
        let zmask = super::mask_of(z);
        check_query(self.n, x, y, zmask)?;
        Ok(self.d_separated_masks(x, y, zmask))
    }

    pub(crate) fn d_separated_masks(&self, x: usize, y: usize, z: NodeMask) -> bool {
        debug_assert!(z & (1 << x) == 0 && z & (1 << y) == 0);
        // Reachability over states (node, entered-from-child?). An active
        // trail may leave a node v:
        //   - entered from a parent (downward): continue to children if
        //     v not in Z; continue to parents if v is in An(Z) (collider).
        //   - entered from a child (upward): if v not in Z, continue to
        //     parents and children.
        let anz = self.ancestor_mask(z);
        let mut children = vec![0 as NodeMask; self.n];
        for v in 0..self.n {
            let mut p = self.parents[v];
            while p != 0 {
                let u = p.trailing_zeros() as usize;
                p &= p - 1;
                children[u] |= 1 << v;
            }
        }
        // state bit 0: reachable moving "down" out of the node (to children),
        // state bit 1: reachable moving "up" out of the node (to parents).
        let mut down = vec![false; self.n];
        let mut up = vec![false; self.n];
        let mut stack = vec![(x, true), (x, false)];
        up[x] = true;
        down[x] = true;
        while let Some((v, upward)) = stack.pop() {
            let (targets, into_child): (NodeMask, bool) = if upward {
                (self.parents[v], false)
            } else {
                (children[v], true)
            };
            let mut t = targets;
            while t != 0 {
                let w = t.trailing_zeros() as usize;
                t &= t - 1;
                if w == y {
                    return false;
                }
                let w_in_z = z & (1 << w) != 0;
                if into_child {
                    // arrived at w from a parent: head-to-head continuation
                    // upward needs w in An(Z); downward needs w not in Z.
                    if anz & (1 << w) != 0 && !up[w] {
                        up[w] = true;
                        stack.push((w, true));
                    }
                    if !w_in_z && !down[w] {
                        down[w] = true;
                        stack.push((w, false));
                    }
                } else if !w_in_z {
                    // arrived at w from a child: tail-to-tail / chain.
                    if !up[w] {
                        up[w] = true;
                        stack.push((w, true));
                    }
                    if !down[w] {
                        down[w] = true;
                        stack.push((w, false));
                    }
                }
            }
        }
        true
    }
}

/// Top-level d-separation query (see [`Dag::d_separated`]).
pub fn d_separated(dag: &Dag, x: usize, y: usize, z: &[usize]) -> Result<bool> {
    dag.d_separated(x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(n: usize, edges: &[(usize, usize)]) -> Dag {
        Dag::new(n, edges).unwrap()
    }

    #[test]
    fn rejects_cycles_and_self_loops() {
        assert!(Dag::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Dag::new(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Dag::new(2, &[(0, 0)]).is_err());
        assert!(Dag::new(2, &[(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn chain_is_blocked_by_middle() {
        // X -> Z -> Y
        let g = dag(3, &[(0, 2), (2, 1)]);
        assert!(g.d_separated(0, 1, &[2]).unwrap());
        assert!(!g.d_separated(0, 1, &[]).unwrap());
    }

    #[test]
    fn collider_blocks_marginally_and_opens_when_conditioned() {
        // X -> Z <- Y
        let g = dag(3, &[(0, 2), (1, 2)]);
        assert!(g.d_separated(0, 1, &[]).unwrap());
        assert!(!g.d_separated(0, 1, &[2]).unwrap());
    }

    #[test]
    fn collider_descendant_opens_path() {
        // X -> Z <- Y, Z -> W: conditioning on W activates the collider.
        let g = dag(4, &[(0, 2), (1, 2), (2, 3)]);
        assert!(!g.d_separated(0, 1, &[3]).unwrap());
        assert!(g.d_separated(0, 1, &[]).unwrap());
    }

    #[test]
    fn query_validation() {
        let g = dag(2, &[(0, 1)]);
        assert!(g.d_separated(0, 0, &[]).is_err());
        assert!(g.d_separated(0, 5, &[]).is_err());
        assert!(g.d_separated(0, 1, &[1]).is_err());
    }

    #[test]
    fn ancestor_mask_is_reflexive_transitive() {
        let g = dag(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.ancestor_mask(1 << 2), 0b111);
        assert_eq!(g.ancestor_mask(1 << 0), 0b001);
        assert_eq!(g.descendant_mask(1 << 0), 0b111);
    }
}
