use super::Dataset;
use crate::error::{invalid, Result};

/// Contingency table for one family (child given an ordered parent list).
///
/// The parent instantiation index `j` is a mixed-radix code over the parent
/// values in parent-list order, with the FIRST parent as the most
/// significant digit: `j = ((v_p1 * r_p2) + v_p2) * r_p3 + ...`. The order
/// is part of the contract so cached tables stay comparable.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub child: usize,
    pub parents: Vec<usize>,
    /// q = product of parent arities
    pub parent_configs: usize,
    /// r = child arity
    pub child_arity: usize,
    /// counts[j * r + k]
    pub counts: Vec<u64>,
    /// row_sums[j] = sum_k counts[j * r + k]
    pub row_sums: Vec<u64>,
}

impl CountTable {
    #[inline]
    pub fn count(&self, j: usize, k: usize) -> u64 {
        self.counts[j * self.child_arity + k]
    }
}

/// Exact counts N_ijk for `child` given `parents` over the dataset.
pub fn count_table(ds: &Dataset, child: usize, parents: &[usize]) -> Result<CountTable> {
    let k = ds.var_count();
    if child >= k || parents.iter().any(|&p| p >= k) {
        return Err(invalid("unknown variable in family"));
    }
    if parents.contains(&child) {
        return Err(invalid("child cannot be its own parent"));
    }
    let mut uniq = std::collections::HashSet::new();
    if !parents.iter().all(|p| uniq.insert(*p)) {
        return Err(invalid("duplicate parents"));
    }
    let r = ds.arity(child);
    let q: usize = parents.iter().map(|&p| ds.arity(p)).product();
    let mut counts = vec![0u64; q * r];
    for row in 0..ds.row_count() {
        let mut j = 0usize;
        for &p in parents {
            j = j * ds.arity(p) + ds.value(row, p) as usize;
        }
        counts[j * r + ds.value(row, child) as usize] += 1;
    }
    let row_sums = (0..q).map(|j| counts[j * r..(j + 1) * r].iter().sum()).collect();
    Ok(CountTable { child, parents: parents.to_vec(), parent_configs: q, child_arity: r, counts, row_sums })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_ds(rows: &[Vec<u8>], k: usize) -> Dataset {
        let names = (0..k).map(|i| format!("v{i}")).collect();
        Dataset::from_codes(names, vec![2; k], rows).unwrap()
    }

    #[test]
    fn direct_tally_no_parents() {
        // X = [1,1,1,0]: k ordered by code: one zero, three ones.
        let ds = binary_ds(&[vec![1], vec![1], vec![1], vec![0]], 1);
        let t = count_table(&ds, 0, &[]).unwrap();
        assert_eq!(t.parent_configs, 1);
        assert_eq!(t.count(0, 0), 1);
        assert_eq!(t.count(0, 1), 3);
        assert_eq!(t.row_sums, vec![4]);
    }

    #[test]
    fn empty_dataset_gives_zero_counts() {
        let ds = binary_ds(&[], 1);
        let t = count_table(&ds, 0, &[]).unwrap();
        assert_eq!(t.counts, vec![0, 0]);
    }

    #[test]
    fn parent_indexing() {
        // rows (X, Y): {(0,0), (0,1), (1,1)}; family Y | X.
        let ds = binary_ds(&[vec![0, 0], vec![0, 1], vec![1, 1]], 2);
        let t = count_table(&ds, 1, &[0]).unwrap();
        assert_eq!((t.count(0, 0), t.count(0, 1)), (1, 1)); // X = 0
        assert_eq!((t.count(1, 0), t.count(1, 1)), (0, 1)); // X = 1
    }

    #[test]
    fn rejects_bad_families() {
        let ds = binary_ds(&[vec![0, 0]], 2);
        assert!(count_table(&ds, 0, &[0]).is_err());
        assert!(count_table(&ds, 0, &[1, 1]).is_err());
        assert!(count_table(&ds, 5, &[]).is_err());
    }

    #[test]
    fn totals_are_consistent() {
        let ds = binary_ds(&[vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 0]], 2);
        let t = count_table(&ds, 1, &[0]).unwrap();
        let total: u64 = t.counts.iter().sum();
        assert_eq!(total, ds.row_count() as u64);
        for j in 0..t.parent_configs {
            assert_eq!(t.row_sums[j], (0..t.child_arity).map(|k| t.count(j, k)).sum::<u64>());
        }
    }
}
