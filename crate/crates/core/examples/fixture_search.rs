//! Dev-time search for a ground-truth structure reproducing the paper's
//! unfaithful-uDAG example properties over observed {X,Y,Z,T,V,W} with one
//! or two hidden confounders.
//!
//! Required properties, with observed ids X=0, Y=1, Z=2, T=3, V=4, W=5:
//!  (a) truth DAG A over observed + hidden:
//!     - Z is an ancestor of neither X nor T,
//!     - (Z => Y) or (Z => V) holds,
//!     - X ind T | {} and X ind T | {Z} (true),
//!     - X dep T | {V,W} (true),
//!     - Y dep V | {} and Y ind V | {Z} (true).
//!  (b) some optimal uDAG B of M = project(A, observed) with:
//!     - X ind_B T | {Z} (d-sep) and X dep_B T | {} (d-connected),
//!     - udag query (X,T,{}) == Unknown (not edge-removal, >= 2 open paths),
//!     - udag unique-path (X,T,{V,W}) == Dependent,
//!     - udag unique-path (Y,V,{}) == Dependent,
//!     - Y ind_B V | {Z}.
//! Optimality of B within the 6-node space is verified by bounded scan:
//! every uDAG of M has skeleton >= skeleton(M), so candidates range over
//! supersets of M's skeleton with parameter count <= params(B).

use bccd::graphs::{latent_project, independence_fingerprint, Dag, Mag};
use bccd::statements::CiStatus;
use rayon::prelude::*;

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;
const V: usize = 4;
const W: usize = 5;

fn main() {
    // candidate observed-edge pool (directed); hidden H1 = 6 (and H2 = 7)
    // attach via child sets from a menu.
    let pool: Vec<(usize, usize)> = vec![
        (Z, Y), (Z, V), (Z, W),
        (T, V), (T, W), (T, Y),
        (V, W), (W, V), (Y, W), (W, Y), (V, T), (W, T), (Y, T),
        (Y, V), (V, Y),
    ];
    let hidden_menus: Vec<Vec<Vec<usize>>> = vec![
        // one hidden
        vec![vec![X, Z]],
        vec![vec![X, Z, Y]],
        vec![vec![X, Z, V]],
        vec![vec![X, T]],
        // two hidden
        vec![vec![X, Z], vec![Z, T]],
        vec![vec![X, Z], vec![T, V]],
        vec![vec![X, Z], vec![T, W]],
        vec![vec![X, Z], vec![Y, V]],
        vec![vec![X, V], vec![T, V]],
        vec![vec![X, W], vec![T, W]],
    ];

    let found = std::sync::Mutex::new(Vec::<String>::new());
    (0u32..(1 << pool.len())).into_par_iter().for_each(|bits| {
        let edges: Vec<(usize, usize)> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        // both orientations of a pair never together
        for menu in &hidden_menus {
            let nh = menu.len();
            let mut all = edges.clone();
            for (h, children) in menu.iter().enumerate() {
                for &c in children {
                    all.push((6 + h, c));
                }
            }
            let Ok(a) = Dag::new(6 + nh, &all) else { continue };
            if !truth_ok(&a) { continue }
            let observed: Vec<usize> = (0..6).collect();
            let Ok(m) = latent_project(&a, &observed) else { continue };
            if !margin_ok(&m) { continue }
            if let Some(b) = find_optimal_b(&m) {
                let mut lock = found.lock().unwrap();
                lock.push(format!("A: {a:?}\nM: {m:?}\nB: {b:?}\n"));
            }
        }
    });
    let lock = found.into_inner().unwrap();
    println!("hits: {}", lock.len());
    for s in lock.iter().take(5) {
        println!("{s}");
    }
}

fn truth_ok(a: &Dag) -> bool {
    // Z ancestor of neither X nor T
    let anc_x = bccd::graphs::ancestors(a.clone(), X).unwrap();
    let anc_t = bccd::graphs::ancestors(a.clone(), T).unwrap();
    if anc_x.contains(&Z) || anc_t.contains(&Z) {
        return false;
    }
    // (Z => Y) or (Z => V)
    let anc_y = bccd::graphs::ancestors(a.clone(), Y).unwrap();
    let anc_v = bccd::graphs::ancestors(a.clone(), V).unwrap();
    if !(anc_y.contains(&Z) || anc_v.contains(&Z)) {
        return false;
    }
    true
}

fn margin_ok(m: &Mag) -> bool {
    use bccd::graphs::m_separated;
    m_separated(m, X, T, &[]).unwrap()
        && m_separated(m, X, T, &[Z]).unwrap()
        && !m_separated(m, X, T, &[V, W]).unwrap()
        && !m_separated(m, Y, V, &[]).unwrap()
        && m_separated(m, Y, V, &[Z]).unwrap()
}

/// Search for an optimal uDAG B of m displaying the required reads.
fn find_optimal_b(m: &Mag) -> Option<Dag> {
    let fp_m = independence_fingerprint(m.clone()).unwrap();
    let skeleton: Vec<(usize, usize)> = (0..6)
        .flat_map(|a| ((a + 1)..6).map(move |b| (a, b)))
        .filter(|&(a, b)| m.adjacent(a, b))
        .collect();
    let missing: Vec<(usize, usize)> = (0..6)
        .flat_map(|a| ((a + 1)..6).map(move |b| (a, b)))
        .filter(|&(a, b)| !m.adjacent(a, b))
        .collect();

    // candidates: orientations of skeleton + up to 3 extra edges
    let mut best_params = u32::MAX;
    let mut best: Vec<Dag> = Vec::new();
    for extra_bits in 0u32..(1 << missing.len()) {
        if extra_bits.count_ones() > 3 {
            continue;
        }
        let mut undirected: Vec<(usize, usize)> = skeleton.clone();
        undirected.extend(
            missing
                .iter()
                .enumerate()
                .filter(|(i, _)| extra_bits >> i & 1 == 1)
                .map(|(_, &e)| e),
        );
        let e = undirected.len();
        for orient in 0u32..(1 << e) {
            let edges: Vec<(usize, usize)> = undirected
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if orient >> i & 1 == 1 { (b, a) } else { (a, b) })
                .collect();
            let Ok(cand) = Dag::new(6, &edges) else { continue };
            let params: u32 = (0..6).map(|v| 1u32 << cand.parents_of(v).len()).sum();
            if params > best_params {
                continue;
            }
            let fp_c = independence_fingerprint(cand.clone()).unwrap();
            if !fp_c.subset_of(&fp_m) {
                continue;
            }
            if params < best_params {
                best_params = params;
                best.clear();
            }
            best.push(cand);
        }
    }
    // among optimal uDAGs, find one displaying the reads
    best.into_iter().find(|b| reads_ok(b))
}

fn reads_ok(b: &Dag) -> bool {
    let sep = |x: usize, y: usize, z: &[usize]| b.d_separated(x, y, z).unwrap();
    // X ind_B T | Z minimal, with the marginal dependence NOT certified
    if !sep(X, T, &[Z]) || sep(X, T, &[]) {
        return false;
    }
    if b.adjacent(X, T) {
        return false;
    }
    // (X,T,{}) must be Unknown: no edge (checked), and not a unique path
    if count_open_paths(b, X, T, &[]) < 2 {
        return false;
    }
    // (X,T,{V,W}) dependent via unique path
    if count_open_paths(b, X, T, &[V, W]) != 1 {
        return false;
    }
    // (Y,V,{}) dependent via unique path; Y ind V | Z
    if b.adjacent(Y, V) || count_open_paths(b, Y, V, &[]) != 1 || !sep(Y, V, &[Z]) {
        return false;
    }
    true
}

fn count_open_paths(b: &Dag, x: usize, y: usize, z: &[usize]) -> usize {
    // path enumeration via the MAG view of b
    let m = Mag::from(b);
    bccd::graphs::connecting_path_count(&m, x, y, z, 10).unwrap()
}
