use crate::error::{invalid, Result};
use crate::graphs::Dag;

/// A discrete Bayesian network: a DAG plus one conditional probability
/// table per node. CPT rows are indexed by the mixed-radix parent
/// instantiation (ascending parent order, first parent most significant),
/// matching the contingency-table convention.
#[derive(Debug, Clone)]
pub struct DiscreteBayesNet {
    pub dag: Dag,
    pub arities: Vec<usize>,
    /// cpts[v][j * arity + k] = P(v = k | parents = j)
    pub cpts: Vec<Vec<f64>>,
}

impl DiscreteBayesNet {
    pub fn new(dag: Dag, arities: Vec<usize>, cpts: Vec<Vec<f64>>) -> Result<Self> {
        let n = dag.node_count();
        if arities.len() != n || cpts.len() != n {
            return Err(invalid("arities and cpts must cover every node"));
        }
        if arities.iter().any(|&a| a < 2) {
            return Err(invalid("arities must be at least 2"));
        }
        let bn = DiscreteBayesNet { dag, arities, cpts };
        for v in 0..n {
            let (q, r) = (bn.parent_configs(v), bn.arities[v]);
            if bn.cpts[v].len() != q * r {
                return Err(invalid(format!("cpt of node {v} has wrong dimensions")));
            }
            for j in 0..q {
                let row = &bn.cpts[v][j * r..(j + 1) * r];
                if row.iter().any(|p| *p < 0.0 || !p.is_finite()) {
                    return Err(invalid(format!("cpt of node {v} has a bad probability")));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(invalid(format!("cpt row {j} of node {v} sums to {sum}")));
                }
            }
        }
        Ok(bn)
    }

    pub fn parent_configs(&self, v: usize) -> usize {
        self.dag.parents_of(v).iter().map(|&p| self.arities[p]).product()
    }

    /// Mixed-radix parent instantiation index for node `v` under a full
    /// assignment.
    pub(crate) fn parent_index(&self, v: usize, assignment: &[u8]) -> usize {
        let mut j = 0usize;
        for p in self.dag.parents_of(v) {
            j = j * self.arities[p] + assignment[p] as usize;
        }
        j
    }

    pub fn cpt_row(&self, v: usize, j: usize) -> &[f64] {
        let r = self.arities[v];
        &self.cpts[v][j * r..(j + 1) * r]
    }

    /// Exact joint probability of a full assignment.
    pub fn joint_probability(&self, assignment: &[u8]) -> f64 {
        (0..self.dag.node_count())
            .map(|v| self.cpt_row(v, self.parent_index(v, assignment))[assignment[v] as usize])
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_row_sums() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let good = DiscreteBayesNet::new(
            dag.clone(),
            vec![2, 2],
            vec![vec![0.3, 0.7], vec![0.9, 0.1, 0.2, 0.8]],
        );
        assert!(good.is_ok());
        let bad = DiscreteBayesNet::new(dag, vec![2, 2], vec![vec![0.3, 0.6], vec![0.9, 0.1, 0.2, 0.8]]);
        assert!(bad.is_err());
    }

    #[test]
    fn joint_probability_factorizes() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let bn = DiscreteBayesNet::new(
            dag,
            vec![2, 2],
            vec![vec![0.3, 0.7], vec![0.9, 0.1, 0.2, 0.8]],
        )
        .unwrap();
        let total: f64 = (0..4)
            .map(|c| bn.joint_probability(&[(c & 1) as u8, (c >> 1) as u8]))
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((bn.joint_probability(&[0, 1]) - 0.3 * 0.1).abs() < 1e-12);
    }
}
