//! Full solve pipeline against an external solver: encode, run the solver
//! process, decode the model, validate the walk, and cross-check the verdict
//! against the native oracle.
//!
//!     cargo run --example solve_pipeline '<solver template>' [k] [n]
//!
//! The template names any DIMACS solver that prints competition-style
//! output, e.g. the bundled one:
//!
//!     cargo build -p satshim
//!     cargo run --example solve_pipeline 'target/debug/satshim {cnf} --seed {seed}' 4 9

use std::time::Duration;

use grwalk::driver::{enumerate_solutions, solve_instance, Dialect, SolverSpec};
use grwalk::formats::SolverStatus;
use grwalk::oracle;
use grwalk::walk::dedup;
use grwalk::InstanceBuilder;

fn main() {
    let mut args = std::env::args().skip(1);
    let template = args
        .next()
        .expect("usage: solve_pipeline '<solver template with {cnf}>' [k] [n]");
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);

    let spec = SolverSpec::new(template).timeout(Duration::from_secs(300));
    let instance = InstanceBuilder::new(k, n).build().expect("valid k, n");

    let outcome = solve_instance(&instance, &spec, Dialect::Cnf, 0).expect("solver run");
    match outcome.result.status {
        SolverStatus::Sat => {
            let walk = outcome.walk.expect("validated walk");
            println!("satisfiable: {walk}");
            println!(
                "validation: {}",
                walk.validate(k).expect("k >= 3")
            );
        }
        other => println!("solver verdict: {other:?}"),
    }

    // all-solutions enumeration through blocking clauses, then compare with
    // the oracle census
    if n <= 12 || (k >= 5 && n <= 30) {
        let sat_walks = enumerate_solutions(&instance, &spec, Dialect::Cnf, 0, None)
            .expect("all-solutions loop");
        let oracle_walks = oracle::enumerate_all(k, n - 1, true).expect("oracle");
        println!(
            "solver found {} walks, oracle {} (classes: {} vs {})",
            sat_walks.len(),
            oracle_walks.len(),
            dedup(sat_walks.iter().cloned()).len(),
            dedup(oracle_walks.iter().cloned()).len(),
        );
        assert_eq!(dedup(sat_walks), dedup(oracle_walks), "pipelines disagree");
        println!("solver pipeline and oracle agree");
    }
}
