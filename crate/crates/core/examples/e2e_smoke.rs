use bccd::search::{discover, BccdConfig};
use bccd::simgen::{random_cpts, random_ground_truth, sample_dataset, pag_accuracy, causal_accuracy, confusion_matrix};
use bccd::statements::build_mapping;

fn main() {
    let mapping = build_mapping(5).unwrap();
    // collider ground truth: 0 -> 2 <- 1
    let dag = bccd::graphs::Dag::new(3, &[(0, 2), (1, 2)]).unwrap();
    let bn = bccd::simgen::DiscreteBayesNet::new(
        dag.clone(),
        vec![2, 2, 2],
        vec![vec![0.4, 0.6], vec![0.7, 0.3], vec![0.9, 0.1, 0.25, 0.75, 0.35, 0.65, 0.05, 0.95]],
    )
    .unwrap();
    let ds = sample_dataset(&bn, 10_000, 5).unwrap();
    let cfg = BccdConfig::default();
    let t = std::time::Instant::now();
    let d = discover(&ds, &cfg, &mapping).unwrap();
    println!("collider discover in {:?}", t.elapsed());
    println!("skeleton: {:?}", d.skeleton.edges());
    println!("pag: {:?}", d.pag);
    for e in d.log.entries.iter().take(12) {
        println!("  {:>2} {:?} {:?} {:?}", e.rank, e.probability, e.statement, e.status);
    }

    // a 5-node model end to end
    let gt = random_ground_truth(5, 0, 4, 0.45, 42).unwrap();
    let bn = random_cpts(&gt.full_dag, &vec![2; 5], 1.0, 43).unwrap();
    let ds = sample_dataset(&bn, 10_000, 44).unwrap();
    let t = std::time::Instant::now();
    let d = discover(&ds, &cfg, &mapping).unwrap();
    println!("5-node discover in {:?}", t.elapsed());
    println!("truth pag: {:?}", gt.true_pag);
    println!("found pag: {:?}", d.pag);
    println!("pag acc: {:.3}", pag_accuracy(&d.pag, &gt.true_pag).unwrap());
    println!("causal acc: {:.3}", causal_accuracy(&d.causal_matrix, &gt).unwrap());
    println!("{}", confusion_matrix(&d.pag, &gt.true_pag).unwrap().render());
}
