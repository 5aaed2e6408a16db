use super::{Mag, Structure};
use crate::error::{invalid, Result};

/// Edge endpoint mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

/// Partial ancestral graph: the equivalence-class representative that keeps
/// the shared skeleton and all invariant endpoint marks, with circles where
/// members disagree.
#[derive(Clone, PartialEq, Eq)]
pub struct Pag {
    n: usize,
    /// marks[i * n + j] = mark shown at node j on the edge i - j.
    marks: Vec<Option<Mark>>,
}

impl std::fmt::Debug for Pag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pag(n={};", self.n)?;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if let (Some(mi), Some(mj)) = (self.mark_at(j, i), self.mark_at(i, j)) {
                    let l = match mi {
                        Mark::Tail => '-',
                        Mark::Arrow => '<',
                        Mark::Circle => 'o',
                    };
                    let r = match mj {
                        Mark::Tail => '-',
                        Mark::Arrow => '>',
                        Mark::Circle => 'o',
                    };
                    write!(f, " {i} {l}-{r} {j}")?;
                }
            }
        }
        write!(f, ")")
    }
}

impl Pag {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > u32::BITS as usize {
            return Err(invalid(format!("node count {n} out of range 1..=32")));
        }
        Ok(Pag { n, marks: vec![None; n * n] })
    }

    /// Sets the edge i - j with `at_i` shown at i and `at_j` shown at j.
    pub fn set_edge(&mut self, i: usize, j: usize, at_i: Mark, at_j: Mark) -> Result<()> {
        if i >= self.n || j >= self.n || i == j {
            return Err(invalid(format!("bad edge ({i}, {j})")));
        }
        self.marks[j * self.n + i] = Some(at_i);
        self.marks[i * self.n + j] = Some(at_j);
        Ok(())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Mark shown at node `j` on the edge between `i` and `j`.
    #[inline]
    pub fn mark_at(&self, i: usize, j: usize) -> Option<Mark> {
        self.marks[i * self.n + j]
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.marks[i * self.n + j].is_some()
    }

    pub fn edge_count(&self) -> usize {
        self.marks.iter().flatten().count() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl From<&Mag> for Pag {
    /// The trivial PAG of a singleton class: marks copied verbatim.
    fn from(m: &Mag) -> Self {
        let n = m.node_count();
        let mut pag = Pag::empty(n).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                if let (Some(at_i), Some(at_j)) = (m.mark_at(j, i), m.mark_at(i, j)) {
                    pag.set_edge(i, j, at_i, at_j).unwrap();
                }
            }
        }
        pag
    }
}

/// PAG of a set of mutually Markov-equivalent structures: the shared
/// skeleton with each mark kept where all members agree and turned into a
/// circle where they differ.
///
/// Callers guarantee mutual equivalence; debug builds verify it.
pub fn pag_of<S>(members: &[S]) -> Result<Pag>
where
    S: Clone + Into<Structure>,
{
    if members.is_empty() {
        return Err(invalid("pag_of needs at least one structure"));
    }
    let structures: Vec<Structure> = members.iter().cloned().map(Into::into).collect();
    let n = structures[0].node_count();
    if structures.iter().any(|s| s.node_count() != n) {
        return Err(invalid("pag_of members must share a node count"));
    }
    debug_assert!(
        {
            let first = crate::graphs::independence_fingerprint(structures[0].clone()).unwrap();
            structures
                .iter()
                .all(|s| crate::graphs::independence_fingerprint(s.clone()).unwrap() == first)
        },
        "pag_of members must be Markov equivalent"
    );
    let mags: Vec<Mag> = structures
        .iter()
        .map(|s| match s {
            Structure::Dag(g) => Mag::from(g),
            Structure::Mag(m) => m.clone(),
        })
        .collect();
    pag_of_mags(n, mags.iter())
}

/// Mark-intersection core of `pag_of`, shared with the internal class
/// machinery (no equivalence re-verification).
pub(crate) fn pag_of_mags<'a>(n: usize, members: impl Iterator<Item = &'a Mag>) -> Result<Pag> {
    let mut acc: Vec<Option<Option<Mark>>> = vec![None; n * n];
    let mut count = 0usize;
    for m in members {
        count += 1;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mark = m.mark_at(i, j);
                let cell = &mut acc[i * n + j];
                match cell {
                    None => *cell = Some(mark),
                    Some(prev) if *prev == mark => {}
                    Some(prev) => {
                        if prev.is_none() || mark.is_none() {
                            return Err(invalid("pag_of members have different skeletons"));
                        }
                        *cell = Some(Some(Mark::Circle));
                    }
                }
            }
        }
    }
    if count == 0 {
        return Err(invalid("pag_of needs at least one structure"));
    }
    let mut pag = Pag::empty(n)?;
    for i in 0..n {
        for j in 0..n {
            if let Some(Some(mark)) = acc[i * n + j] {
                pag.marks[i * n + j] = Some(mark);
            }
        }
    }
    Ok(pag)
}

/// Whether a path from `x` to `y` exists in which no edge points an
/// arrowhead back toward `x`'s side, i.e. the path could be oriented into
/// a directed path x -> ... -> y by resolving circles.
pub fn potentially_directed_path(pag: &Pag, x: usize, y: usize) -> Result<bool> {
    let n = pag.node_count();
    if x >= n || y >= n {
        return Err(invalid(format!("node id out of range (n = {n})")));
    }
    if x == y {
        return Err(invalid("x and y must be distinct"));
    }
    // BFS: edge u - v is traversable from u iff its mark at u is not an
    // arrowhead.
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([x]);
    seen[x] = true;
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if seen[v] || !pag.adjacent(u, v) {
                continue;
            }
            if pag.mark_at(v, u) == Some(Mark::Arrow) {
                continue;
            }
            if v == y {
                return Ok(true);
            }
            seen[v] = true;
            queue.push_back(v);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Dag;

    #[test]
    fn pag_of_opposite_orientations_gives_circles() {
        let a = Dag::new(2, &[(0, 1)]).unwrap();
        let b = Dag::new(2, &[(1, 0)]).unwrap();
        let p = pag_of(&[a, b]).unwrap();
        assert_eq!(p.mark_at(0, 1), Some(Mark::Circle));
        assert_eq!(p.mark_at(1, 0), Some(Mark::Circle));
    }

    #[test]
    fn pag_of_singleton_keeps_marks() {
        let g = Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
        let p = pag_of(std::slice::from_ref(&g)).unwrap();
        assert_eq!(p.mark_at(0, 2), Some(Mark::Arrow));
        assert_eq!(p.mark_at(2, 0), Some(Mark::Tail));
        assert!(!p.adjacent(0, 1));
    }

    #[test]
    fn pag_of_chain_fork_class_is_all_circles() {
        // chain 0 -> 2 -> 1, reversed chain, and fork 0 <- 2 -> 1 form one
        // equivalence class.
        let members = [
            Dag::new(3, &[(0, 2), (2, 1)]).unwrap(),
            Dag::new(3, &[(1, 2), (2, 0)]).unwrap(),
            Dag::new(3, &[(2, 0), (2, 1)]).unwrap(),
        ];
        let p = pag_of(&members).unwrap();
        for (i, j) in [(0, 2), (2, 0), (1, 2), (2, 1)] {
            assert_eq!(p.mark_at(i, j), Some(Mark::Circle), "({i},{j})");
        }
        assert!(!p.adjacent(0, 1));
    }

    #[test]
    fn pdp_respects_arrowheads() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        let p = Pag::from(&Mag::from(&g));
        assert!(potentially_directed_path(&p, 0, 1).unwrap());
        assert!(!potentially_directed_path(&p, 1, 0).unwrap());

        let mut circles = Pag::empty(2).unwrap();
        circles.set_edge(0, 1, Mark::Circle, Mark::Circle).unwrap();
        assert!(potentially_directed_path(&circles, 0, 1).unwrap());
        assert!(potentially_directed_path(&circles, 1, 0).unwrap());
    }

    #[test]
    fn pdp_through_fork_is_blocked() {
        // 0 <- 2 -> 1 as a singleton "class": path 0 .. 1 starts against an
        // arrowhead at 0's side.
        let g = Dag::new(3, &[(2, 0), (2, 1)]).unwrap();
        let p = Pag::from(&Mag::from(&g));
        assert!(!potentially_directed_path(&p, 0, 1).unwrap());
        assert!(potentially_directed_path(&p, 2, 1).unwrap());
    }
}
