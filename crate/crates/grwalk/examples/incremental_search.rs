//! The incremental a(k) search procedure driven through a SAT solver: for
//! each step count m, one pinned instance per endpoint (x, m-x); a(k) is the
//! first m with every endpoint unsatisfiable. Endpoint walk sets come from
//! the native oracle and every solver verdict is cross-checked against them.
//!
//!     cargo run --example incremental_search '<solver template>' [k]
//!
//! e.g.:
//!
//!     cargo build -p satshim
//!     cargo run --example incremental_search 'target/debug/satshim {cnf}' 4

use std::time::Duration;

use grwalk::driver::{incremental_a_search, AllSolutionsMode, SolverSpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let template = args
        .next()
        .expect("usage: incremental_search '<solver template with {cnf}>' [k]");
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);

    let spec = SolverSpec::new(template).timeout(Duration::from_secs(600));
    let result =
        incremental_a_search(k, &spec, AllSolutionsMode::Oracle, 0).expect("search to finish");

    println!("a({k}) = {}", result.a_value);
    for (m, walks) in &result.corpus {
        println!("    {m} steps: {} walks", walks.len());
    }
    println!("maximal walks up to isomorphism:");
    for walk in &result.witnesses {
        println!("    {walk}");
    }
}
