//! Build the constraint system asserting an n-point GR(k) walk exists and
//! write it in both CNF and KNF form.
//!
//!     cargo run --example encode_instance <k> <n> [out_prefix]
//!
//! Produces <out_prefix>.cnf and <out_prefix>.knf (default prefix
//! "instance"), and prints a breakdown of the constraint counts.

use std::fs::File;

use grwalk::formats::{write_dimacs, write_knf, LoweringMethod};
use grwalk::InstanceBuilder;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(29);
    let prefix = args.next().unwrap_or_else(|| "instance".into());

    let instance = InstanceBuilder::new(k, n).build().expect("valid k, n");
    println!(
        "k={k} n={n}: {} point variables, {} plain clauses, {} cardinality constraints",
        instance.varmap().count(),
        instance.clause_count(),
        instance.cards().len()
    );

    let cnf_path = format!("{prefix}.cnf");
    write_dimacs(
        &instance,
        LoweringMethod::SequentialCounter,
        &mut File::create(&cnf_path).expect("create cnf"),
    )
    .expect("write cnf");
    println!("wrote {cnf_path} (sequential-counter lowering)");

    let knf_path = format!("{prefix}.knf");
    write_knf(&instance, &mut File::create(&knf_path).expect("create knf")).expect("write knf");
    println!("wrote {knf_path} (native klauses)");
}
