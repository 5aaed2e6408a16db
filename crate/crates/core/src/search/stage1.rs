//! Stage 1: adjacency search. Levels K = 0.. condition on K-subsets of the
//! current neighborhoods; every scored subset updates the statement ledger
//! by max-merge, and pairs whose non-adjacency probability exceeds theta
//! lose their skeleton edge.

use super::{BccdConfig, StatementLedger, StructurePriorKind};
use crate::error::{invalid, Result};
use crate::scoring::{
    structure_posterior, structure_prior_multilevel, structure_prior_uniform, Dataset,
    StructurePrior, StructurePosterior,
};
use crate::statements::{CausalStatement, MappingTable};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Undirected adjacency state over the dataset variables; starts complete,
/// edges are only ever removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    n: usize,
    adjacent: Vec<bool>,
}

impl Skeleton {
    pub fn complete(n: usize) -> Self {
        let mut adjacent = vec![true; n * n];
        for v in 0..n {
            adjacent[v * n + v] = false;
        }
        Skeleton { n, adjacent }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacent[a * self.n + b]
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adjacent[a * self.n + b] = false;
        self.adjacent[b * self.n + a] = false;
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(v, u)).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }
}

/// Per-level structure priors (index = level - 1).
pub(crate) fn build_prior_family(cfg: &BccdConfig) -> Result<Vec<StructurePrior>> {
    match cfg.structure_prior {
        StructurePriorKind::UniformPerLevel => {
            (1..=cfg.k_max).map(structure_prior_uniform).collect()
        }
        StructurePriorKind::Multilevel => {
            structure_prior_multilevel(structure_prior_uniform(cfg.k_max)?)
        }
    }
}

/// Statement probabilities gathered from one scored subset: for every
/// statement in the union of mapping rows over the subset's level, the
/// posterior mass of structures whose row entails it.
pub(crate) fn subset_statement_masses(
    posterior: &StructurePosterior,
    mapping: &MappingTable,
) -> Vec<(CausalStatement, f64)> {
    let level = posterior.level;
    let rows = mapping.rows_at(level);
    let mut acc: std::collections::BTreeMap<CausalStatement, f64> = Default::default();
    for (i, row) in rows.iter().enumerate() {
        let p = posterior.posterior[i];
        if p == 0.0 {
            continue;
        }
        for s in row {
            *acc.entry(*s).or_insert(0.0) += p;
        }
    }
    // slot -> global variable translation
    acc.into_iter()
        .map(|(s, p)| (s.map_vars(|slot| posterior.vars[slot as usize] as u16), p.min(1.0)))
        .collect()
}

/// Scores one unprocessed subset: posterior over its structures, statement
/// masses max-merged into the ledger, and edge removal for pairs whose
/// non-adjacency probability exceeds theta (strictly).
pub fn score_subset(
    ds: &Dataset,
    w: &[usize],
    mapping: &MappingTable,
    priors: &[StructurePrior],
    cfg: &BccdConfig,
    ledger: &mut StatementLedger,
    skeleton: &mut Skeleton,
) -> Result<()> {
    if w.len() < 2 || w.len() > cfg.k_max {
        return Err(invalid(format!("subset size {} out of range 2..={}", w.len(), cfg.k_max)));
    }
    let posterior = structure_posterior(ds, w, &priors[w.len() - 1], cfg.dirichlet)?;
    apply_subset_result(&subset_statement_masses(&posterior, mapping), cfg.theta, ledger, skeleton);
    Ok(())
}

fn apply_subset_result(
    masses: &[(CausalStatement, f64)],
    theta: f64,
    ledger: &mut StatementLedger,
    skeleton: &mut Skeleton,
) {
    for &(s, p) in masses {
        let best = ledger.update(s, p);
        if let CausalStatement::NonAdjacent { x, y } = s {
            if best > theta {
                skeleton.remove_edge(x as usize, y as usize);
            }
        }
    }
}

/// The stage-1 loop. For K = 0.. and every ordered pair (X, Y) adjacent in
/// the level-start skeleton snapshot, every K-subset of Adj(X) \ {Y} forms
/// a candidate W = {X, Y} u Z; unprocessed subsets are scored. Edge
/// removals apply as results merge, but the job list of a level is fixed
/// by its snapshot (the K-level barrier), which keeps runs deterministic
/// under any worker count.
pub fn adjacency_search(
    ds: &Dataset,
    cfg: &BccdConfig,
    mapping: &MappingTable,
) -> Result<(Skeleton, StatementLedger)> {
    cfg.validate()?;
    if mapping.k_max < cfg.k_max {
        return Err(invalid(format!(
            "mapping covers k_max {} but the run needs {}",
            mapping.k_max, cfg.k_max
        )));
    }
    let n = ds.var_count();
    let priors = build_prior_family(cfg)?;
    let mut skeleton = Skeleton::complete(n);
    let mut ledger = StatementLedger::new();
    let mut processed: BTreeSet<Vec<usize>> = BTreeSet::new();

    for k in 0..=(cfg.k_max - 2) {
        // snapshot at level start fixes this level's job list
        let snapshot = skeleton.clone();
        let mut jobs: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            for y in snapshot.neighbors(x) {
                let pool: Vec<usize> =
                    snapshot.neighbors(x).into_iter().filter(|&u| u != y).collect();
                if pool.len() < k {
                    continue;
                }
                for z in k_subsets(&pool, k) {
                    let mut w: Vec<usize> = vec![x, y];
                    w.extend(z);
                    w.sort_unstable();
                    if processed.contains(&w) || jobs.contains(&w) {
                        continue;
                    }
                    jobs.push(w);
                }
            }
        }
        if jobs.is_empty() {
            break;
        }
        // score jobs (in parallel when allowed), then fold results in job
        // order: ledger max-merge and removals commute, so the fold equals
        // any interleaving, and the fixed order makes runs bit-identical.
        let results: Vec<Vec<(CausalStatement, f64)>> = run_jobs(ds, &jobs, mapping, &priors, cfg)?;
        for (w, masses) in jobs.iter().zip(&results) {
            processed.insert(w.clone());
            apply_subset_result(masses, cfg.theta, &mut ledger, &mut skeleton);
        }
    }
    Ok((skeleton, ledger))
}

fn run_jobs(
    ds: &Dataset,
    jobs: &[Vec<usize>],
    mapping: &MappingTable,
    priors: &[StructurePrior],
    cfg: &BccdConfig,
) -> Result<Vec<Vec<(CausalStatement, f64)>>> {
    let score_one = |w: &Vec<usize>| -> Result<Vec<(CausalStatement, f64)>> {
        let posterior = structure_posterior(ds, w, &priors[w.len() - 1], cfg.dirichlet)?;
        Ok(subset_statement_masses(&posterior, mapping))
    };
    match cfg.jobs {
        Some(1) => jobs.iter().map(score_one).collect(),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| invalid(format!("worker pool: {e}")))?;
            pool.install(|| jobs.par_iter().map(score_one).collect())
        }
        None => jobs.par_iter().map(score_one).collect(),
    }
}

/// All K-subsets of `pool` in lexicographic index order.
fn k_subsets(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > pool.len() {
        return out;
    }
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        out.push(indices.iter().map(|&i| pool[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if indices[i] != i + pool.len() - k {
                break;
            }
        }
        indices[i] += 1;
        for j in (i + 1)..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_enumerates_combinations() {
        let pool = [3, 5, 7];
        assert_eq!(k_subsets(&pool, 0), vec![Vec::<usize>::new()]);
        assert_eq!(k_subsets(&pool, 2), vec![vec![3, 5], vec![3, 7], vec![5, 7]]);
        assert_eq!(k_subsets(&pool, 3).len(), 1);
        assert!(k_subsets(&pool, 4).is_empty());
    }

    #[test]
    fn skeleton_edges_only_removed() {
        let mut s = Skeleton::complete(3);
        assert_eq!(s.edge_count(), 3);
        s.remove_edge(0, 2);
        assert!(!s.has_edge(2, 0));
        assert_eq!(s.neighbors(0), vec![1]);
    }
}
