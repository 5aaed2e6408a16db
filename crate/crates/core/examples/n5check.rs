use bccd::graphs::enumerate_dags;
use bccd::statements::{bruteforce_statements, build_mapping, statements_from_faithful_structure};

fn main() {
    let t0 = std::time::Instant::now();
    let mapping = build_mapping(5).unwrap();
    println!("mapping built in {:?}", t0.elapsed());

    let t1 = std::time::Instant::now();
    let dags = enumerate_dags(5).unwrap();
    // force the oracle table build once
    let _ = bruteforce_statements(&dags[0]).unwrap();
    println!("oracle table built in {:?}", t1.elapsed());

    let t2 = std::time::Instant::now();
    let mut unsound = 0usize;
    let mut incomplete = 0usize;
    let mut differs_from_faithful = 0usize;
    let mut shown = 0;
    for (i, g) in dags.iter().enumerate() {
        let fast = mapping.row_set(5, i);
        let brute = bruteforce_statements(g).unwrap();
        if !fast.is_subset(&brute) {
            unsound += 1;
            if shown < 5 {
                shown += 1;
                println!("UNSOUND {g:?}");
                for s in fast.difference(&brute) {
                    println!("  fast-only: {s:?}");
                }
            }
        }
        if fast != brute {
            incomplete += 1;
        }
        let faithful = statements_from_faithful_structure(g.clone()).unwrap();
        if brute != faithful {
            differs_from_faithful += 1;
        }
    }
    println!("checked 29281 rows in {:?}", t2.elapsed());
    println!("unsound: {unsound}, fast!=brute: {incomplete}, brute!=faithful: {differs_from_faithful}");
}
