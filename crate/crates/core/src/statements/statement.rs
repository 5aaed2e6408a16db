/// A logical causal statement over at most three variables.
///
/// Variables are positional slots (0..n) in mapping-table contexts and
/// global dataset ids in ledger contexts. Canonical form orders the
/// unordered pairs: `DisjunctiveCause` has `x < y`, `NonAdjacent` has
/// `x < y`. The derived `Ord` is the tie-breaking "canonical statement
/// encoding" used wherever determinism requires one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CausalStatement {
    /// no direct edge x - y
    NonAdjacent { x: u16, y: u16 },
    /// (z => x) or (z => y)
    DisjunctiveCause { z: u16, x: u16, y: u16 },
    /// z does not cause x
    NonCause { z: u16, x: u16 },
    /// z causes x (arises only through logic closure)
    Cause { z: u16, x: u16 },
}

impl CausalStatement {
    pub fn non_adjacent(x: u16, y: u16) -> Self {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        CausalStatement::NonAdjacent { x, y }
    }

    pub fn disjunctive_cause(z: u16, x: u16, y: u16) -> Self {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        CausalStatement::DisjunctiveCause { z, x, y }
    }

    pub fn non_cause(z: u16, x: u16) -> Self {
        CausalStatement::NonCause { z, x }
    }

    pub fn cause(z: u16, x: u16) -> Self {
        CausalStatement::Cause { z, x }
    }

    /// Variables named by the statement, in slot order.
    pub fn vars(&self) -> Vec<u16> {
        match *self {
            CausalStatement::NonAdjacent { x, y } => vec![x, y],
            CausalStatement::DisjunctiveCause { z, x, y } => vec![z, x, y],
            CausalStatement::NonCause { z, x } => vec![z, x],
            CausalStatement::Cause { z, x } => vec![z, x],
        }
    }

    /// Statement with every variable passed through `f` (slot -> global id
    /// translation), re-canonicalized.
    pub fn map_vars(&self, f: impl Fn(u16) -> u16) -> CausalStatement {
        match *self {
            CausalStatement::NonAdjacent { x, y } => Self::non_adjacent(f(x), f(y)),
            CausalStatement::DisjunctiveCause { z, x, y } => Self::disjunctive_cause(f(z), f(x), f(y)),
            CausalStatement::NonCause { z, x } => Self::non_cause(f(z), f(x)),
            CausalStatement::Cause { z, x } => Self::cause(f(z), f(x)),
        }
    }

    /// Human-readable rendering with a variable-name lookup.
    pub fn render(&self, name: &dyn Fn(u16) -> String) -> String {
        match *self {
            CausalStatement::NonAdjacent { x, y } => {
                format!("no-edge({}, {})", name(x), name(y))
            }
            CausalStatement::DisjunctiveCause { z, x, y } => {
                format!("{} => {} or {} => {}", name(z), name(x), name(z), name(y))
            }
            CausalStatement::NonCause { z, x } => format!("{} =/=> {}", name(z), name(x)),
            CausalStatement::Cause { z, x } => format!("{} => {}", name(z), name(x)),
        }
    }

    /// Wire encoding for the mapping cache: kind byte plus three variable
    /// slots (unused slots are 0xFF).
    pub(crate) fn encode(&self) -> [u8; 4] {
        match *self {
            CausalStatement::DisjunctiveCause { z, x, y } => [0, z as u8, x as u8, y as u8],
            CausalStatement::NonCause { z, x } => [1, z as u8, x as u8, 0xFF],
            CausalStatement::NonAdjacent { x, y } => [2, x as u8, y as u8, 0xFF],
            CausalStatement::Cause { z, x } => [3, z as u8, x as u8, 0xFF],
        }
    }

    pub(crate) fn decode(bytes: [u8; 4]) -> Option<CausalStatement> {
        let v = |b: u8| b as u16;
        match bytes {
            [0, z, x, y] if y != 0xFF => Some(Self::disjunctive_cause(v(z), v(x), v(y))),
            [1, z, x, 0xFF] => Some(Self::non_cause(v(z), v(x))),
            [2, x, y, 0xFF] => Some(Self::non_adjacent(v(x), v(y))),
            [3, z, x, 0xFF] => Some(Self::cause(v(z), v(x))),
            _ => None,
        }
    }

    /// CSV column values (kind, vars) for the decision log.
    pub fn kind_str(&self) -> &'static str {
        match self {
            CausalStatement::NonAdjacent { .. } => "non-adjacent",
            CausalStatement::DisjunctiveCause { .. } => "disjunctive-cause",
            CausalStatement::NonCause { .. } => "non-cause",
            CausalStatement::Cause { .. } => "cause",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization_orders_pairs() {
        assert_eq!(CausalStatement::non_adjacent(3, 1), CausalStatement::NonAdjacent { x: 1, y: 3 });
        assert_eq!(
            CausalStatement::disjunctive_cause(0, 4, 2),
            CausalStatement::DisjunctiveCause { z: 0, x: 2, y: 4 }
        );
    }

    #[test]
    fn encode_decode_roundtrip() {
        let samples = [
            CausalStatement::non_adjacent(0, 1),
            CausalStatement::disjunctive_cause(2, 0, 1),
            CausalStatement::non_cause(4, 3),
            CausalStatement::cause(1, 2),
        ];
        for s in samples {
            assert_eq!(CausalStatement::decode(s.encode()), Some(s));
        }
        assert_eq!(CausalStatement::decode([9, 0, 0, 0xFF]), None);
    }
}
