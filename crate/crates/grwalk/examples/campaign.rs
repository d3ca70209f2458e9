//! Parallel solve campaign: one solver process per (cube, seed) pair with a
//! bounded process pool, results appended to a crash-tolerant ledger and
//! found walks deduplicated by normal form.
//!
//!     cargo run --example campaign '<solver template>' [k] [n] [antidiagonal] [seeds]
//!
//! e.g.:
//!
//!     cargo build -p satshim
//!     cargo run --example campaign 'target/debug/satshim {cnf} --seed {seed}' 4 9 4 3

use std::time::Duration;

use grwalk::driver::{generate_antidiagonal_cubes, run_campaign, Dialect, SolverSpec};
use grwalk::InstanceBuilder;

fn main() {
    let mut args = std::env::args().skip(1);
    let template = args
        .next()
        .expect("usage: campaign '<solver template with {cnf} {seed}>' [k] [n] [c] [seeds]");
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);
    let c: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let seed_count: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);

    let instance = InstanceBuilder::new(k, n).build().expect("valid k, n");
    let cubes = generate_antidiagonal_cubes(&instance, c).expect("antidiagonal in range");
    let seeds: Vec<u64> = (0..seed_count).collect();
    let spec = SolverSpec::new(template)
        .width(4)
        .timeout(Duration::from_secs(300));

    let ledger_path = std::env::temp_dir().join(format!("campaign_k{k}_n{n}.ledger"));
    let outcome = run_campaign(
        &instance,
        Some(&cubes),
        &seeds,
        &spec,
        Dialect::Cnf,
        Some(&ledger_path),
    )
    .expect("campaign");

    println!(
        "{} jobs ({} cubes x {} seeds), ledger at {}",
        outcome.records.len(),
        cubes.len(),
        seeds.len(),
        ledger_path.display()
    );
    for record in &outcome.records {
        println!("    {}", record.to_line());
    }
    println!("distinct walks found: {}", outcome.distinct_walks.len());
    for walk in &outcome.distinct_walks {
        println!("    {walk}");
    }
}
