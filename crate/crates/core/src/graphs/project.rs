use super::{mask_of, Dag, Mag, NodeMask};
use crate::error::{invalid, Result};

/// Latent projection of a DAG onto an observed subset, as a MAG with nodes
/// relabeled to dense ids `0..observed.len()` in ascending original order.
///
/// Adjacency: x - y iff x and y are d-connected given every subset of
/// observed \ {x, y}. Marks: the endpoint at x is a tail iff x is an
/// ancestor of y in the full DAG, else an arrowhead (no selection set).
/// The output is maximal by construction: adjacency is exactly
/// inseparability.
pub fn latent_project(dag: &Dag, observed: &[usize]) -> Result<Mag> {
    let n = dag.node_count();
    let obs_mask = mask_of(observed);
    if observed.is_empty() {
        return Err(invalid("observed set must be nonempty"));
    }
    if observed.iter().any(|&v| v >= n) {
        return Err(invalid(format!("observed node out of range (n = {n})")));
    }
    let mut nodes: Vec<usize> = observed.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let m = nodes.len();

    let mut parents = vec![0 as NodeMask; m];
    let mut spouses = vec![0 as NodeMask; m];
    for xi in 0..m {
        for yi in (xi + 1)..m {
            let (x, y) = (nodes[xi], nodes[yi]);
            let others = obs_mask & !(1 << x) & !(1 << y);
            let inseparable = subsets_of(others).all(|z| !dag.d_separated_masks(x, y, z));
            if !inseparable {
                continue;
            }
            let x_anc_y = dag.ancestor_mask(1 << y) & (1 << x) != 0;
            let y_anc_x = dag.ancestor_mask(1 << x) & (1 << y) != 0;
            debug_assert!(!(x_anc_y && y_anc_x), "ancestry cycle in a DAG");
            if x_anc_y {
                parents[yi] |= 1 << xi;
            } else if y_anc_x {
                parents[xi] |= 1 << yi;
            } else {
                spouses[xi] |= 1 << yi;
                spouses[yi] |= 1 << xi;
            }
        }
    }
    let mag = Mag::from_masks_unchecked(parents, spouses);
    debug_assert!(mag.is_ancestral(), "projection of a DAG must be ancestral");
    Ok(mag)
}

/// Iterates all submasks of `mask`, including 0 and `mask` itself.
pub(crate) fn subsets_of(mask: NodeMask) -> impl Iterator<Item = NodeMask> {
    let mut current: NodeMask = 0;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = current;
        if current == mask {
            done = true;
        } else {
            current = (current.wrapping_sub(mask)) & mask;
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{independence_fingerprint, Mark};

    #[test]
    fn projection_of_full_graph_is_identity_on_marks() {
        let g = Dag::new(2, &[(0, 1)]).unwrap();
        let m = latent_project(&g, &[0, 1]).unwrap();
        assert_eq!(m.mark_at(0, 1), Some(Mark::Arrow));
        assert_eq!(m.mark_at(1, 0), Some(Mark::Tail));
    }

    #[test]
    fn hidden_confounder_projects_to_bidirected_edge() {
        // X <- H -> Y observed {X, Y}: id order X=0, Y=1, H=2.
        let g = Dag::new(3, &[(2, 0), (2, 1)]).unwrap();
        let m = latent_project(&g, &[0, 1]).unwrap();
        assert_eq!(m.mark_at(0, 1), Some(Mark::Arrow));
        assert_eq!(m.mark_at(1, 0), Some(Mark::Arrow));
    }

    #[test]
    fn separable_pair_stays_nonadjacent() {
        // X -> Z -> Y observed {X, Y, Z} is itself; observed {X, Y} keeps
        // the directed edge (X remains an ancestor of Y).
        let g = Dag::new(3, &[(0, 2), (2, 1)]).unwrap();
        let full = latent_project(&g, &[0, 1, 2]).unwrap();
        assert!(full.adjacent(0, 2) && full.adjacent(2, 1) && !full.adjacent(0, 1));
        let m = latent_project(&g, &[0, 1]).unwrap();
        assert_eq!(m.mark_at(1, 0), Some(Mark::Tail));
        assert_eq!(m.mark_at(0, 1), Some(Mark::Arrow));
    }

    #[test]
    fn projection_preserves_observable_independencies() {
        // exhaustive on 4-node DAGs over all 3-subsets.
        for g in crate::graphs::enumerate_dags(4).unwrap() {
            let gfp = independence_fingerprint(g.clone()).unwrap();
            for keep in [0b0111u32, 0b1011, 0b1101, 0b1110] {
                let obs: Vec<usize> = (0..4).filter(|&v| keep & (1 << v) != 0).collect();
                let mag = latent_project(&g, &obs).unwrap();
                let projected = independence_fingerprint(mag).unwrap();
                assert_eq!(projected, gfp.restrict(keep), "{g:?} keep={keep:#b}");
            }
        }
    }

    #[test]
    fn subset_iteration_covers_powerset() {
        let subs: Vec<u32> = subsets_of(0b1010).collect();
        assert_eq!(subs.len(), 4);
        assert!(subs.contains(&0) && subs.contains(&0b1010) && subs.contains(&0b0010) && subs.contains(&0b1000));
    }
}
