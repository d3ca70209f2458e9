//! Reachability frontier: walk the upper and lower boundaries of the
//! GR(k)-reachable region with one solver call per point, persisting every
//! verdict to an append-only database that later encodes benefit from.
//!
//!     cargo run --example reach_frontier '<solver template>' [k] [n_max] [db-path]
//!
//! e.g. with the bundled solver:
//!
//!     cargo build -p satshim
//!     cargo run --example reach_frontier 'target/debug/satshim {cnf}' 4 9 reach4.db

use std::path::PathBuf;
use std::time::Duration;

use grwalk::driver::{frontier_bounds, FrontierKind, ReachabilityDb, SolverSpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let template = args
        .next()
        .expect("usage: reach_frontier '<solver template with {cnf}>' [k] [n_max] [db]");
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let n_max: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);
    let db_path: PathBuf = args
        .next()
        .unwrap_or_else(|| format!("reach{k}.db"))
        .into();

    let spec = SolverSpec::new(template).timeout(Duration::from_secs(300));
    let mut db = ReachabilityDb::open(k, &db_path).expect("open database");
    println!("database {} starts with {} verdicts", db_path.display(), db.len());

    for kind in [FrontierKind::Upper, FrontierKind::Lower] {
        let outcome =
            frontier_bounds(k, n_max, &spec, kind, &mut db, None, 0).expect("frontier run");
        println!("{kind:?} frontier trail:");
        for (point, verdict) in &outcome.trail {
            println!("    {point} {verdict}");
        }
    }

    let mirror = db.mirror_complete_unreachable();
    println!(
        "{} verdicts recorded; {} unreachable points are mirror-complete \
         (eligible for translated blocking clauses)",
        db.len(),
        mirror.len()
    );
}
