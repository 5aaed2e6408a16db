use bccd::graphs::enumerate_dags;
use bccd::statements::{bruteforce_statements, build_mapping, statements_from_faithful_structure};

fn main() {
    let t0 = std::time::Instant::now();
    let mapping = build_mapping(4).unwrap();
    println!("mapping built in {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    let dags = enumerate_dags(4).unwrap();
    let mut mismatch_oracle = 0;
    let mut mismatch_faithful = 0;
    let mut shown = 0;
    for (i, g) in dags.iter().enumerate() {
        let fast = mapping.row_set(4, i);
        let brute = bruteforce_statements(g).unwrap();
        let faithful = statements_from_faithful_structure(g.clone()).unwrap();
        if fast != brute {
            mismatch_oracle += 1;
            if shown < 6 {
                shown += 1;
                println!("== {g:?}");
                for s in fast.difference(&brute) { println!("  fast-only:  {s:?}"); }
                for s in brute.difference(&fast) { println!("  brute-only: {s:?}"); }
            }
        }
        if brute != faithful { mismatch_faithful += 1; }
    }
    println!("oracle pass in {:?}", t1.elapsed());
    println!("fast!=brute: {mismatch_oracle}/543, brute!=faithful: {mismatch_faithful}/543");
}
