use super::DiscreteBayesNet;
use crate::error::{invalid, BccdError, Result};
use crate::graphs::{latent_project, pag_of, Dag, Mag, Pag};
use crate::scoring::Dataset;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::Gamma;

const REJECTION_BUDGET: usize = 10_000;

/// Random DAG: a uniformly random topological order with independent edge
/// inclusion at probability `edge_density` per pair, rejected while any
/// node's total degree exceeds `max_degree`. Deterministic per seed.
pub fn random_dag(n: usize, max_degree: usize, edge_density: f64, seed: u64) -> Result<Dag> {
    if n == 0 {
        return Err(invalid("need at least one node"));
    }
    if !(0.0..=1.0).contains(&edge_density) {
        return Err(invalid("edge_density must be in [0, 1]"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_BUDGET {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut edges = Vec::new();
        let mut degree = vec![0usize; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() < edge_density {
                    edges.push((order[i], order[j]));
                    degree[order[i]] += 1;
                    degree[order[j]] += 1;
                }
            }
        }
        if degree.iter().all(|&d| d <= max_degree) {
            return Dag::new(n, &edges);
        }
    }
    Err(BccdError::Generation(format!(
        "no DAG with max degree {max_degree} at density {edge_density} within {REJECTION_BUDGET} draws"
    )))
}

/// Attaches symmetric-Dirichlet(alpha) CPT rows to a DAG.
pub fn random_cpts(dag: &Dag, arities: &[usize], alpha: f64, seed: u64) -> Result<DiscreteBayesNet> {
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(invalid("alpha must be positive"));
    }
    if arities.len() != dag.node_count() {
        return Err(invalid("arities must cover every node"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gamma = Gamma::new(alpha, 1.0).map_err(|e| invalid(format!("bad alpha: {e}")))?;
    let mut cpts = Vec::with_capacity(dag.node_count());
    for v in 0..dag.node_count() {
        let r = arities[v];
        let q: usize = dag.parents_of(v).iter().map(|&p| arities[p]).product();
        let mut table = Vec::with_capacity(q * r);
        for _ in 0..q {
            // normalized gammas; tiny totals renormalize against 0-sums
            let mut row: Vec<f64> = (0..r).map(|_| gamma.sample(&mut rng).max(1e-300)).collect();
            let total: f64 = row.iter().sum();
            for p in &mut row {
                *p /= total;
            }
            let drift = 1.0 - row.iter().sum::<f64>();
            row[r - 1] += drift;
            table.extend(row);
        }
        cpts.push(table);
    }
    DiscreteBayesNet::new(dag.clone(), arities.to_vec(), cpts)
}

/// Ancestral sampling in topological order; deterministic per seed.
pub fn sample_dataset(bn: &DiscreteBayesNet, n_rows: usize, seed: u64) -> Result<Dataset> {
    let n = bn.dag.node_count();
    let order = bn.dag.topological_order();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_rows);
    let mut assignment = vec![0u8; n];
    for _ in 0..n_rows {
        for &v in &order {
            let row = bn.cpt_row(v, bn.parent_index(v, &assignment));
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut value = row.len() - 1;
            for (k, p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    value = k;
                    break;
                }
            }
            assignment[v] = value as u8;
        }
        rows.push(assignment.clone());
    }
    let names = (0..n).map(|v| format!("V{v}")).collect();
    Dataset::from_codes(names, bn.arities.clone(), &rows)
}

/// A synthetic ground-truth model: the full DAG over observed plus hidden
/// confounders, and the MAG / PAG it induces over the observed margin.
/// Hidden nodes are root confounders with at least two observed children,
/// placed after the observed ids.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub full_dag: Dag,
    pub observed: usize,
    pub hidden: Vec<usize>,
    pub true_mag: Mag,
    pub true_pag: Pag,
}

/// Generates a ground-truth model: a random DAG over the observed
/// variables plus `hidden` root confounders, projected onto the observed
/// margin. The true PAG is the mark-intersection over the projection's
/// Markov equivalence class (enumerated over its skeleton).
pub fn random_ground_truth(
    observed: usize,
    hidden: usize,
    max_degree: usize,
    edge_density: f64,
    seed: u64,
) -> Result<GroundTruth> {
    if observed < 2 {
        return Err(invalid("need at least two observed variables"));
    }
    let base = random_dag(observed, max_degree, edge_density, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n_total = observed + hidden;
    let mut edges = base.edges();
    for h in 0..hidden {
        let hid = observed + h;
        // a hidden confounder must touch >= 2 observed children or it is
        // invisible in the margin
        let k = rng.gen_range(2..=3.min(observed));
        let mut children: Vec<usize> = (0..observed).collect();
        children.shuffle(&mut rng);
        for &c in children.iter().take(k) {
            edges.push((hid, c));
        }
    }
    let full_dag = Dag::new(n_total, &edges)?;
    let observed_ids: Vec<usize> = (0..observed).collect();
    let true_mag = latent_project(&full_dag, &observed_ids)?;
    let true_pag = pag_of_mag_class(&true_mag)?;
    Ok(GroundTruth { full_dag, observed, hidden: (observed..n_total).collect(), true_mag, true_pag })
}

/// PAG of a MAG's Markov equivalence class, by enumerating every ancestral
/// mark assignment over the same skeleton and intersecting the marks of
/// those with an identical fingerprint. Exponential in the edge count;
/// fine for simgen-sized truths.
pub fn pag_of_mag_class(mag: &Mag) -> Result<Pag> {
    let n = mag.node_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .filter(|&(a, b)| mag.adjacent(a, b))
        .collect();
    let target = crate::graphs::independence_fingerprint(mag.clone())?;
    let mut members: Vec<Mag> = Vec::new();
    let total = 3u64.pow(pairs.len() as u32);
    for code in 0..total {
        let mut directed = Vec::new();
        let mut bidirected = Vec::new();
        let mut c = code;
        for &(a, b) in &pairs {
            match c % 3 {
                0 => directed.push((a, b)),
                1 => directed.push((b, a)),
                _ => bidirected.push((a, b)),
            }
            c /= 3;
        }
        let Ok(candidate) = Mag::new(n, &directed, &bidirected) else {
            continue;
        };
        if equivalent_to_target(&candidate, &target, n) {
            members.push(candidate);
        }
    }
    debug_assert!(!members.is_empty(), "the class contains the MAG itself");
    pag_of(&members)
}

/// Fingerprint equality with early exit (most candidates diverge quickly).
fn equivalent_to_target(candidate: &Mag, target: &crate::graphs::Fingerprint, n: usize) -> bool {
    for x in 0..n {
        for y in (x + 1)..n {
            for z in 0..(1u32 << n) {
                if z & (1 << x) != 0 || z & (1 << y) != 0 {
                    continue;
                }
                let sep = crate::graphs::m_separated_masks(candidate, x, y, z);
                if sep != target.separated(x, y, z) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_and_zero_density() {
        assert_eq!(random_dag(1, 0, 0.5, 7).unwrap().node_count(), 1);
        assert_eq!(random_dag(6, 5, 0.0, 7).unwrap().edge_count(), 0);
    }

    #[test]
    fn determinism_per_seed() {
        let a = random_dag(6, 4, 0.4, 123).unwrap();
        let b = random_dag(6, 4, 0.4, 123).unwrap();
        assert_eq!(a, b);
        let gt1 = random_ground_truth(5, 1, 4, 0.4, 9).unwrap();
        let gt2 = random_ground_truth(5, 1, 4, 0.4, 9).unwrap();
        assert_eq!(gt1.full_dag, gt2.full_dag);
        assert_eq!(gt1.true_pag, gt2.true_pag);
    }

    #[test]
    fn mean_edge_count_tracks_density() {
        // binomial oracle: mean edges over draws within 3 sigma of
        // C(n,2) * density. Unconstrained degree keeps draws unbiased.
        let (n, density, draws) = (6usize, 0.3f64, 2000usize);
        let pairs = (n * (n - 1) / 2) as f64;
        let mut total = 0usize;
        for seed in 0..draws as u64 {
            total += random_dag(n, n, density, 1000 + seed).unwrap().edge_count();
        }
        let mean = total as f64 / draws as f64;
        let sigma = (pairs * density * (1.0 - density) / draws as f64).sqrt();
        assert!((mean - pairs * density).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn cpt_rows_sum_to_one() {
        let dag = random_dag(5, 4, 0.5, 3).unwrap();
        let bn = random_cpts(&dag, &[2; 5], 1.0, 4).unwrap();
        for v in 0..5 {
            for j in 0..bn.parent_configs(v) {
                let s: f64 = bn.cpt_row(v, j).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn root_marginal_matches_cpt() {
        // multinomial oracle on a root node.
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let bn = DiscreteBayesNet::new(
            dag,
            vec![2, 2],
            vec![vec![0.3, 0.7], vec![0.9, 0.1, 0.2, 0.8]],
        )
        .unwrap();
        let n = 100_000usize;
        let ds = sample_dataset(&bn, n, 11).unwrap();
        let ones = (0..n).filter(|&r| ds.value(r, 0) == 1).count() as f64;
        let sigma = (n as f64 * 0.3 * 0.7).sqrt();
        assert!((ones - 0.7 * n as f64).abs() < 3.0 * sigma);
    }

    #[test]
    fn empty_sample() {
        let dag = Dag::new(2, &[]).unwrap();
        let bn = random_cpts(&dag, &[2, 2], 1.0, 5).unwrap();
        let ds = sample_dataset(&bn, 0, 1).unwrap();
        assert_eq!(ds.row_count(), 0);
        assert_eq!(ds.var_count(), 2);
    }

    #[test]
    fn deterministic_cpts_give_constant_configurations() {
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let bn = DiscreteBayesNet::new(
            dag,
            vec![2, 2],
            vec![vec![1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0]],
        )
        .unwrap();
        let ds = sample_dataset(&bn, 50, 2).unwrap();
        for r in 0..50 {
            assert_eq!(ds.value(r, 0), 0);
            assert_eq!(ds.value(r, 1), 1);
        }
    }

    #[test]
    fn confounder_projection_has_bidirected_edge() {
        // force density 0 over observed: the only edges come from the
        // hidden confounder, so the projection is purely bidirected.
        let gt = random_ground_truth(4, 1, 4, 0.0, 21).unwrap();
        assert_eq!(gt.true_mag.node_count(), 4);
        let bidirected = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .filter(|&(a, b)| {
                gt.true_mag.mark_at(a, b) == Some(crate::graphs::Mark::Arrow)
                    && gt.true_mag.mark_at(b, a) == Some(crate::graphs::Mark::Arrow)
            })
            .count();
        assert!(bidirected >= 1);
    }

    #[test]
    fn goodness_of_fit_on_two_node_net() {
        // chi-squared GOF against the exact joint at p > 0.01 (df = 3,
        // critical value 11.345).
        let dag = Dag::new(2, &[(0, 1)]).unwrap();
        let bn = DiscreteBayesNet::new(
            dag,
            vec![2, 2],
            vec![vec![0.4, 0.6], vec![0.8, 0.2, 0.3, 0.7]],
        )
        .unwrap();
        let n = 100_000usize;
        let ds = sample_dataset(&bn, n, 17).unwrap();
        let mut counts = [0f64; 4];
        for r in 0..n {
            counts[(ds.value(r, 0) + 2 * ds.value(r, 1)) as usize] += 1.0;
        }
        let mut stat = 0.0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                let expected = n as f64 * bn.joint_probability(&[x, y]);
                let observed = counts[(x + 2 * y) as usize];
                stat += (observed - expected).powi(2) / expected;
            }
        }
        assert!(stat < 11.345, "chi2 = {stat}");
    }
}
