//! Plain-text graph format shared by the CLI and test fixtures.
//!
//! ```text
//! nodes: 4
//! 0 -> 1      # tail at 0, arrowhead at 1
//! 0 <-> 2     # arrowheads at both ends
//! 1 o-o 3     # circles at both ends
//! ```
//!
//! One header line `nodes: <n>`, then one line per edge `a <tok> b`, where
//! the token renders the mark at each endpoint: `-` tail, `<`/`>` arrowhead,
//! `o` circle, joined with a dash that collapses against tails (`-->` is
//! written `->`). `#` starts a comment; blank lines are ignored.

use super::{Dag, Mag, Mark, Pag};
use crate::error::{BccdError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    pub n: usize,
    /// (a, mark at a, mark at b, b) with a < b
    pub edges: Vec<(usize, Mark, Mark, usize)>,
}

fn render_edge(at_a: Mark, at_b: Mark) -> String {
    let l = match at_a {
        Mark::Tail => "",
        Mark::Arrow => "<",
        Mark::Circle => "o",
    };
    let r = match at_b {
        Mark::Tail => "",
        Mark::Arrow => ">",
        Mark::Circle => "o",
    };
    format!("{l}-{r}")
}

fn parse_edge_token(tok: &str, line: usize) -> Result<(Mark, Mark)> {
    let bad = || BccdError::Parse { line, msg: format!("bad edge token '{tok}'") };
    let bytes = tok.as_bytes();
    if bytes.is_empty() {
        return Err(bad());
    }
    let at_a = match bytes[0] {
        b'<' => Mark::Arrow,
        b'o' => Mark::Circle,
        b'-' => Mark::Tail,
        _ => return Err(bad()),
    };
    let at_b = match bytes[bytes.len() - 1] {
        b'>' => Mark::Arrow,
        b'o' => Mark::Circle,
        b'-' => Mark::Tail,
        _ => return Err(bad()),
    };
    // everything between the endpoint glyphs must be dashes
    let start = usize::from(at_a != Mark::Tail);
    let end = bytes.len() - usize::from(at_b != Mark::Tail);
    if start > end || !bytes[start..end].iter().all(|&b| b == b'-') {
        return Err(bad());
    }
    // a bare tail-tail token must still contain at least one dash
    if at_a == Mark::Tail && at_b == Mark::Tail && !bytes.iter().all(|&b| b == b'-') {
        return Err(bad());
    }
    Ok((at_a, at_b))
}

impl MarkedGraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes: {}\n", self.n);
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        for (a, at_a, at_b, b) in edges {
            out.push_str(&format!("{a} {} {b}\n", render_edge(at_a, at_b)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<MarkedGraph> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("nodes:") {
                if n.is_some() {
                    return Err(BccdError::Parse { line: line_no, msg: "duplicate header".into() });
                }
                n = Some(rest.trim().parse().map_err(|_| BccdError::Parse {
                    line: line_no,
                    msg: format!("bad node count '{}'", rest.trim()),
                })?);
                continue;
            }
            let n = n.ok_or_else(|| BccdError::Parse {
                line: line_no,
                msg: "edge before 'nodes:' header".into(),
            })?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(BccdError::Parse {
                    line: line_no,
                    msg: format!("expected 'a <edge> b', got '{line}'"),
                });
            }
            let parse_id = |s: &str| -> Result<usize> {
                let v: usize = s
                    .parse()
                    .map_err(|_| BccdError::Parse { line: line_no, msg: format!("bad node id '{s}'") })?;
                if v >= n {
                    return Err(BccdError::Parse {
                        line: line_no,
                        msg: format!("node id {v} out of range (n = {n})"),
                    });
                }
                Ok(v)
            };
            let a = parse_id(parts[0])?;
            let b = parse_id(parts[2])?;
            if a == b {
                return Err(BccdError::Parse { line: line_no, msg: format!("self-loop on {a}") });
            }
            let (at_a, at_b) = parse_edge_token(parts[1], line_no)?;
            if a < b {
                edges.push((a, at_a, at_b, b));
            } else {
                edges.push((b, at_b, at_a, a));
            }
        }
        let n = n.ok_or(BccdError::Parse { line: 1, msg: "missing 'nodes:' header".into() })?;
        edges.sort_unstable();
        Ok(MarkedGraph { n, edges })
    }

    pub fn to_dag(&self) -> Result<Dag> {
        let mut dir = Vec::new();
        for &(a, at_a, at_b, b) in &self.edges {
            match (at_a, at_b) {
                (Mark::Tail, Mark::Arrow) => dir.push((a, b)),
                (Mark::Arrow, Mark::Tail) => dir.push((b, a)),
                _ => {
                    return Err(BccdError::InvalidArgument(format!(
                        "edge {a} - {b} is not directed; not a DAG"
                    )))
                }
            }
        }
        Dag::new(self.n, &dir)
    }

    pub fn to_mag(&self) -> Result<Mag> {
        let mut dir = Vec::new();
        let mut bidir = Vec::new();
        for &(a, at_a, at_b, b) in &self.edges {
            match (at_a, at_b) {
                (Mark::Tail, Mark::Arrow) => dir.push((a, b)),
                (Mark::Arrow, Mark::Tail) => dir.push((b, a)),
                (Mark::Arrow, Mark::Arrow) => bidir.push((a, b)),
                _ => {
                    return Err(BccdError::InvalidArgument(format!(
                        "edge {a} - {b} carries a circle or double tail; not a MAG"
                    )))
                }
            }
        }
        Mag::new(self.n, &dir, &bidir)
    }

    pub fn to_pag(&self) -> Result<Pag> {
        let mut pag = Pag::empty(self.n)?;
        for &(a, at_a, at_b, b) in &self.edges {
            pag.set_edge(a, b, at_a, at_b)?;
        }
        Ok(pag)
    }
}

impl From<&Dag> for MarkedGraph {
    fn from(g: &Dag) -> Self {
        let edges = g
            .edges()
            .into_iter()
            .map(|(a, b)| {
                if a < b {
                    (a, Mark::Tail, Mark::Arrow, b)
                } else {
                    (b, Mark::Arrow, Mark::Tail, a)
                }
            })
            .collect();
        MarkedGraph { n: g.node_count(), edges }
    }
}

impl From<&Mag> for MarkedGraph {
    fn from(m: &Mag) -> Self {
        let n = m.node_count();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if let (Some(at_a), Some(at_b)) = (m.mark_at(b, a), m.mark_at(a, b)) {
                    edges.push((a, at_a, at_b, b));
                }
            }
        }
        MarkedGraph { n, edges }
    }
}

impl From<&Pag> for MarkedGraph {
    fn from(p: &Pag) -> Self {
        let n = p.node_count();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if let (Some(at_a), Some(at_b)) = (p.mark_at(b, a), p.mark_at(a, b)) {
                    edges.push((a, at_a, at_b, b));
                }
            }
        }
        MarkedGraph { n, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_the_documented_tokens() {
        assert_eq!(render_edge(Mark::Tail, Mark::Arrow), "->");
        assert_eq!(render_edge(Mark::Arrow, Mark::Arrow), "<->");
        assert_eq!(render_edge(Mark::Circle, Mark::Circle), "o-o");
        assert_eq!(render_edge(Mark::Circle, Mark::Arrow), "o->");
        assert_eq!(render_edge(Mark::Tail, Mark::Circle), "-o");
    }

    #[test]
    fn parse_accepts_comments_and_roundtrips() {
        let text = "# a fixture\nnodes: 4\n0 -> 1\n0 <-> 2  # confounded\n1 o-o 3\n";
        let g = MarkedGraph::parse(text).unwrap();
        assert_eq!(g.n, 4);
        assert_eq!(g.edges.len(), 3);
        let rendered = g.to_text();
        let reparsed = MarkedGraph::parse(&rendered).unwrap();
        assert_eq!(g, reparsed);
        // write -> read -> write is a fixed point
        assert_eq!(rendered, reparsed.to_text());
    }

    #[test]
    fn dag_mag_pag_conversions() {
        let text = "nodes: 3\n0 -> 2\n1 -> 2\n";
        let g = MarkedGraph::parse(text).unwrap();
        assert!(g.to_dag().is_ok());
        assert!(g.to_mag().is_ok());
        let bid = MarkedGraph::parse("nodes: 2\n0 <-> 1\n").unwrap();
        assert!(bid.to_dag().is_err());
        assert!(bid.to_mag().is_ok());
        let circ = MarkedGraph::parse("nodes: 2\n0 o-o 1\n").unwrap();
        assert!(circ.to_mag().is_err());
        assert!(circ.to_pag().is_ok());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(MarkedGraph::parse("0 -> 1\n").is_err());
        assert!(MarkedGraph::parse("nodes: 2\n0 => 1\n").is_err());
        assert!(MarkedGraph::parse("nodes: 2\n0 -> 5\n").is_err());
        assert!(MarkedGraph::parse("nodes: 2\n0 -> \n").is_err());
    }
}
