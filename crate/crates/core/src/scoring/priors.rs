use crate::error::{capacity, invalid, Result};
use crate::graphs::{Fingerprint, LevelTables, MAX_ENUM_NODES};

/// A probability per canonical DAG index over `level` nodes.
#[derive(Debug, Clone)]
pub struct StructurePrior {
    pub level: usize,
    pub weights: Vec<f64>,
}

impl StructurePrior {
    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(invalid("prior weights must be nonnegative and finite"));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("prior weights sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Equal probability for every canonical DAG on `n` nodes.
pub fn structure_prior_uniform(n: usize) -> Result<StructurePrior> {
    let tables = LevelTables::get(n)?;
    let count = tables.dag_count();
    Ok(StructurePrior { level: n, weights: vec![1.0 / count as f64; count] })
}

/// Consistent multi-level prior: starting from a base prior at a reference
/// level K, the level-m prior (m < K) is obtained by marginalization. Each
/// K-node structure is projected onto the fixed subset {0..m-1}; its base
/// mass lands on the m-node fingerprint class matching the projection,
/// averaged over the m! relabelings of the subset (PAG-isomorph averaging),
/// and is then split uniformly among the DAGs sharing that fingerprint.
///
/// Projections whose fingerprint no m-node DAG realizes (possible from
/// hidden-confounder patterns at m = 4) fall back to the projected
/// structure's optimal uDAG classes: the minimum-parameter DAG classes
/// whose independencies are a subset of the projection's.
///
/// Returns priors for levels 1..=K (level K is the base itself).
pub fn structure_prior_multilevel(base: StructurePrior) -> Result<Vec<StructurePrior>> {
    let k = base.level;
    if k == 0 || k > MAX_ENUM_NODES {
        return Err(capacity(format!("reference level {k} out of range 1..={MAX_ENUM_NODES}")));
    }
    let base_tables = LevelTables::get(k)?;
    if base.weights.len() != base_tables.dag_count() {
        return Err(invalid("base prior length does not match the level"));
    }
    base.validate()?;
    let uniform_base = base.weights.windows(2).all(|w| w[0] == w[1]);

    let mut out: Vec<StructurePrior> = Vec::with_capacity(k);
    for m in 1..k {
        let tables = LevelTables::get(m)?;
        let keep_mask = (1u32 << m) - 1;
        let perms = permutations(m);

        // class index by fingerprint at level m
        let class_by_fp: std::collections::HashMap<Fingerprint, usize> = tables
            .classes
            .iter()
            .enumerate()
            .map(|(c, cl)| (cl.fingerprint, c))
            .collect();

        // mass per level-m class; uniform bases accumulate exact integer
        // contribution counts so anchor ratios come out as single divisions.
        let mut mass = vec![0.0f64; tables.classes.len()];
        let mut count = vec![0u64; tables.classes.len()];
        let mut any_fallback = false;
        let mut fallback_cache: std::collections::HashMap<Fingerprint, Vec<usize>> = Default::default();

        for (i, g_fp) in base_tables.fingerprints.iter().enumerate() {
            let projected = g_fp.restrict(keep_mask);
            for perm in &perms {
                let fp = if perm_is_identity(perm) { projected } else { projected.permute(perm) };
                let classes: Vec<usize> = match class_by_fp.get(&fp) {
                    Some(&c) => vec![c],
                    None => {
                        any_fallback = true;
                        fallback_cache
                            .entry(fp)
                            .or_insert_with(|| optimal_udag_classes(tables, &fp))
                            .clone()
                    }
                };
                let share = base.weights[i] / classes.len() as f64;
                for c in classes {
                    mass[c] += share;
                    count[c] += 1;
                }
            }
        }

        // With a uniform base and no fallback splits, every contribution
        // carries the same weight: a single integer division keeps the
        // anchor ratios (6/25, 1/3) exact.
        let exact = uniform_base && !any_fallback;
        let total_pairs = (base_tables.dag_count() as u64) * perms.len() as u64;
        let mut weights = vec![0.0f64; tables.dag_count()];
        for (c, class) in tables.classes.iter().enumerate() {
            let class_mass = if exact {
                count[c] as f64 / total_pairs as f64
            } else {
                mass[c] / perms.len() as f64
            };
            let per_member = class_mass / class.members.len() as f64;
            for &d in &class.members {
                weights[d as usize] = per_member;
            }
        }
        out.push(StructurePrior { level: m, weights });
    }
    out.push(base);
    Ok(out)
}

/// Minimum-parameter DAG classes whose independencies are a subset of `fp`.
fn optimal_udag_classes(tables: &LevelTables, fp: &Fingerprint) -> Vec<usize> {
    let mut best = u32::MAX;
    let mut classes = Vec::new();
    for (c, class) in tables.classes.iter().enumerate() {
        if class.fingerprint.subset_of(fp) {
            match class.param_count.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = class.param_count;
                    classes = vec![c];
                }
                std::cmp::Ordering::Equal => classes.push(c),
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    classes
}

fn perm_is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(&mut current, n, &mut out);
    out.sort();
    out
}

fn heap_permute(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(arr.clone());
        return;
    }
    for i in 0..k {
        heap_permute(arr, k - 1, out);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weights() {
        assert_eq!(structure_prior_uniform(2).unwrap().weights, vec![1.0 / 3.0; 3]);
        assert_eq!(structure_prior_uniform(3).unwrap().weights.len(), 25);
        let p5 = structure_prior_uniform(5).unwrap();
        assert_eq!(p5.weights.len(), 29281);
        p5.validate().unwrap();
    }

    #[test]
    fn multilevel_from_level_3_gives_6_over_25_for_independence() {
        // A uniform prior over 3-node DAGs marginalizes to a 2-node prior
        // putting exactly 6/25 on the edgeless structure, not 1/3.
        let base = structure_prior_uniform(3).unwrap();
        let family = structure_prior_multilevel(base).unwrap();
        assert_eq!(family.len(), 3);
        let level2 = &family[1];
        assert_eq!(level2.level, 2);
        let tables = LevelTables::get(2).unwrap();
        let edgeless = tables.dags.iter().position(|g| g.edge_count() == 0).unwrap();
        assert_eq!(level2.weights[edgeless], 6.0 / 25.0);
        level2.validate().unwrap();
        // the two single-edge DAGs split the rest evenly
        let others: Vec<f64> = level2
            .weights
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != edgeless)
            .map(|(_, w)| *w)
            .collect();
        assert_eq!(others, vec![19.0 / 50.0, 19.0 / 50.0]);
    }

    #[test]
    fn multilevel_base_level_is_identity() {
        let base = structure_prior_uniform(2).unwrap();
        let family = structure_prior_multilevel(base.clone()).unwrap();
        assert_eq!(family.last().unwrap().weights, base.weights);
    }

    #[test]
    fn multilevel_masses_normalize_at_every_level() {
        let base = structure_prior_uniform(4).unwrap();
        for prior in structure_prior_multilevel(base).unwrap() {
            prior.validate().unwrap();
        }
    }
}
