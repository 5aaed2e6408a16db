use super::bd::log_family_score;
use super::{Dataset, DirichletPrior, StructurePrior};
use crate::error::{capacity, invalid, Result};
use crate::graphs::{LevelTables, MAX_ENUM_NODES};

/// Memoized per-family log scores for one variable subset. Scoring all
/// structures over a subset touches every (child, parent-set) family many
/// times; counting each family once dominates the cost of a scoring pass.
pub struct FamilyScoreCache {
    /// scores[child * 2^m + parent_mask]
    scores: Vec<f64>,
    m: usize,
}

impl FamilyScoreCache {
    /// Eagerly scores every family over the subset `vars` (slot i plays
    /// dataset variable vars[i]).
    pub fn build(ds: &Dataset, vars: &[usize], prior: DirichletPrior) -> Result<FamilyScoreCache> {
        let m = vars.len();
        if m > MAX_ENUM_NODES {
            return Err(capacity(format!("subset size {m} exceeds {MAX_ENUM_NODES}")));
        }
        let mut scores = vec![0.0f64; m << m];
        for child in 0..m {
            for pmask in 0..(1u32 << m) {
                if pmask & (1 << child) != 0 {
                    continue;
                }
                let parents: Vec<usize> =
                    (0..m).filter(|&p| pmask & (1 << p) != 0).map(|p| vars[p]).collect();
                scores[(child << m) | pmask as usize] =
                    log_family_score(ds, vars[child], &parents, prior)?;
            }
        }
        Ok(FamilyScoreCache { scores, m })
    }

    #[inline]
    pub fn family(&self, child: usize, parent_mask: u32) -> f64 {
        self.scores[(child << self.m) | parent_mask as usize]
    }

    /// ln p(D | G) assembled from cached family scores.
    #[inline]
    pub fn dag_score(&self, g: &crate::graphs::Dag) -> f64 {
        (0..self.m).map(|v| self.family(v, g.parent_mask(v))).sum()
    }
}

/// Normalized posterior over every canonical DAG on a variable subset.
#[derive(Debug, Clone)]
pub struct StructurePosterior {
    pub level: usize,
    /// dataset variable ids in slot order (ascending)
    pub vars: Vec<usize>,
    pub log_likelihoods: Vec<f64>,
    pub posterior: Vec<f64>,
}

/// posterior_i ∝ exp(log_bd_score(g_i)) * prior_i over all canonical DAGs
/// on the subset, normalized by log-sum-exp. When N = 0 every likelihood is
/// exactly 1 and the posterior equals the prior.
pub fn structure_posterior(
    ds: &Dataset,
    vars: &[usize],
    prior: &StructurePrior,
    dprior: DirichletPrior,
) -> Result<StructurePosterior> {
    let m = vars.len();
    if m == 0 || m > MAX_ENUM_NODES {
        return Err(capacity(format!("subset size {m} out of range 1..={MAX_ENUM_NODES}")));
    }
    if prior.level != m {
        return Err(invalid(format!("prior level {} does not match subset size {m}", prior.level)));
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m {
        return Err(invalid("subset variables must be distinct"));
    }
    let tables = LevelTables::get(m)?;
    let cache = FamilyScoreCache::build(ds, &sorted, dprior)?;
    let log_likelihoods: Vec<f64> = tables.dags.iter().map(|g| cache.dag_score(g)).collect();

    let max_ll = log_likelihoods.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut unnorm: Vec<f64> = Vec::with_capacity(log_likelihoods.len());
    for (ll, w) in log_likelihoods.iter().zip(&prior.weights) {
        unnorm.push((ll - max_ll).exp() * w);
    }
    let total: f64 = unnorm.iter().sum();
    if !(total > 0.0) {
        return Err(invalid("posterior normalization collapsed; prior may be degenerate"));
    }
    let posterior = unnorm.into_iter().map(|u| u / total).collect();
    Ok(StructurePosterior { level: m, vars: sorted, log_likelihoods, posterior })
}

impl StructurePosterior {
    fn slot_of(&self, var: usize) -> Result<usize> {
        self.vars
            .binary_search(&var)
            .map_err(|_| invalid(format!("variable {var} not in the scored subset")))
    }

    /// Sums posterior mass of structures entailing x _||_ y | z (slots
    /// resolved from dataset variable ids).
    pub fn independence_mass(&self, x: usize, y: usize, z: &[usize]) -> Result<f64> {
        let (sx, sy) = (self.slot_of(x)?, self.slot_of(y)?);
        if sx == sy {
            return Err(invalid("x and y must differ"));
        }
        let mut zmask = 0u32;
        for &v in z {
            let s = self.slot_of(v)?;
            if s == sx || s == sy {
                return Err(invalid("conditioning set overlaps {x, y}"));
            }
            zmask |= 1 << s;
        }
        let tables = LevelTables::get(self.level)?;
        let mut mass = 0.0;
        for (i, fp) in tables.fingerprints.iter().enumerate() {
            if fp.separated(sx, sy, zmask) {
                mass += self.posterior[i];
            }
        }
        Ok(mass)
    }

    /// Sums posterior mass of structures entailing the minimal conditional
    /// dependence x _|/|_ y | z ∪ {z'} with x _||_ y | z (z' breaks the
    /// separation).
    pub fn minimal_dependence_mass(&self, x: usize, y: usize, z: &[usize], z_prime: usize) -> Result<f64> {
        let (sx, sy) = (self.slot_of(x)?, self.slot_of(y)?);
        let sz = self.slot_of(z_prime)?;
        if sz == sx || sz == sy {
            return Err(invalid("z' must differ from x and y"));
        }
        let mut zmask = 0u32;
        for &v in z {
            let s = self.slot_of(v)?;
            if s == sx || s == sy || s == sz {
                return Err(invalid("conditioning set overlaps {x, y, z'}"));
            }
            zmask |= 1 << s;
        }
        let tables = LevelTables::get(self.level)?;
        let mut mass = 0.0;
        for (i, fp) in tables.fingerprints.iter().enumerate() {
            if !fp.separated(sx, sy, zmask | (1 << sz)) && fp.separated(sx, sy, zmask) {
                mass += self.posterior[i];
            }
        }
        Ok(mass)
    }

    /// Posterior mass of structures in which the pair is non-adjacent.
    pub fn nonadjacent_mass(&self, x: usize, y: usize) -> Result<f64> {
        let (sx, sy) = (self.slot_of(x)?, self.slot_of(y)?);
        let tables = LevelTables::get(self.level)?;
        let mut mass = 0.0;
        for (i, g) in tables.dags.iter().enumerate() {
            if !g.adjacent(sx, sy) {
                mass += self.posterior[i];
            }
        }
        Ok(mass)
    }
}

/// Probability that `x _||_ y | z` holds, by posterior model averaging over
/// all structures on {x, y} ∪ z.
pub fn independence_probability(
    ds: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    prior: &StructurePrior,
    dprior: DirichletPrior,
) -> Result<f64> {
    let posterior = posterior_over(ds, x, y, z, None, prior, dprior)?;
    posterior.independence_mass(x, y, z)
}

/// Probability of the minimal conditional dependence `x _|/|_ y | z ∪ [z']`.
pub fn minimal_dependence_probability(
    ds: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    z_prime: usize,
    prior: &StructurePrior,
    dprior: DirichletPrior,
) -> Result<f64> {
    let posterior = posterior_over(ds, x, y, z, Some(z_prime), prior, dprior)?;
    posterior.minimal_dependence_mass(x, y, z, z_prime)
}

fn posterior_over(
    ds: &Dataset,
    x: usize,
    y: usize,
    z: &[usize],
    z_prime: Option<usize>,
    prior: &StructurePrior,
    dprior: DirichletPrior,
) -> Result<StructurePosterior> {
    if x == y {
        return Err(invalid("x and y must differ"));
    }
    let mut vars = vec![x, y];
    vars.extend_from_slice(z);
    vars.extend(z_prime);
    vars.sort_unstable();
    vars.dedup();
    structure_posterior(ds, &vars, prior, dprior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::structure_prior_uniform;

    fn binary_ds(rows: &[Vec<u8>], k: usize) -> Dataset {
        let names = (0..k).map(|i| format!("v{i}")).collect();
        Dataset::from_codes(names, vec![2; k], rows).unwrap()
    }

    #[test]
    fn no_data_posterior_equals_prior() {
        let ds = binary_ds(&[], 2);
        let prior = structure_prior_uniform(2).unwrap();
        let post = structure_posterior(&ds, &[0, 1], &prior, DirichletPrior::K2).unwrap();
        assert_eq!(post.posterior, prior.weights);
    }

    #[test]
    fn prior_only_independence_is_one_third() {
        let ds = binary_ds(&[], 2);
        let prior = structure_prior_uniform(2).unwrap();
        let p = independence_probability(&ds, 0, 1, &[], &prior, DirichletPrior::K2).unwrap();
        assert_eq!(p, 1.0 / 3.0);
    }

    #[test]
    fn strong_dependence_crushes_the_edgeless_structure() {
        let rows: Vec<Vec<u8>> = (0..1000).map(|i| vec![(i % 2) as u8, (i % 2) as u8]).collect();
        let ds = binary_ds(&rows, 2);
        let prior = structure_prior_uniform(2).unwrap();
        let p = independence_probability(&ds, 0, 1, &[], &prior, DirichletPrior::K2).unwrap();
        assert!(p < 0.01, "got {p}");
        let post = structure_posterior(&ds, &[0, 1], &prior, DirichletPrior::K2).unwrap();
        let sum: f64 = post.posterior.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn independence_plus_adjacency_mass_bounded() {
        let rows: Vec<Vec<u8>> = (0..60).map(|i| vec![(i % 2) as u8, ((i / 3) % 2) as u8]).collect();
        let ds = binary_ds(&rows, 2);
        let prior = structure_prior_uniform(2).unwrap();
        let post = structure_posterior(&ds, &[0, 1], &prior, DirichletPrior::K2).unwrap();
        let p_indep = post.independence_mass(0, 1, &[]).unwrap();
        let p_adjacent = 1.0 - post.nonadjacent_mass(0, 1).unwrap();
        assert!(p_indep + p_adjacent <= 1.0 + 1e-12);
    }

    #[test]
    fn minimal_dependence_mass_on_colliders() {
        // data from X -> Z <- Y with Z a noisy OR of X and Y: structures
        // entailing X _|/|_ Y | [Z] with X _||_ Y carry most of the mass at
        // large N. The gate must be stochastic AND asymmetric: an exact
        // gate makes every exact factorization equally likely, and an XOR
        // fits all three collider orientations equally well.
        let mut rows = Vec::new();
        let flip_period = [10u32, 5, 4, 8]; // distinct noise rate per (x, y) cell
        for i in 0..1000u32 {
            let x = (i % 2) as u8;
            let y = ((i / 2) % 2) as u8;
            let gate = x | y;
            let period = flip_period[(x + 2 * y) as usize];
            let z = if (i / 4) % period == 0 { 1 - gate } else { gate };
            rows.push(vec![x, y, z]);
        }
        let ds = binary_ds(&rows, 3);
        let prior = structure_prior_uniform(3).unwrap();
        let p =
            minimal_dependence_probability(&ds, 0, 1, &[], 2, &prior, DirichletPrior::K2).unwrap();
        assert!(p > 0.5, "got {p}");
        // and the plain independence mode rejects X _||_ Y | Z
        let q = independence_probability(&ds, 0, 1, &[2], &prior, DirichletPrior::K2).unwrap();
        assert!(q < 0.2, "got {q}");
    }
}

