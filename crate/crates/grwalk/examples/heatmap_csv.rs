//! Export per-point walk counts as plot-ready CSV: how many normal-form
//! GR(k) walks end at (or pass through) each lattice point.
//!
//!     cargo run --release --example heatmap_csv <k> [endings|visits] [out.csv]
//!
//! Feasible for k <= 5 in seconds; k = 6 runs for on the order of an hour.

use std::fs::File;

use grwalk::oracle::{point_counts, write_heatmap_csv};
use grwalk::Point;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let mode = args.next().unwrap_or_else(|| "endings".into());
    let out = args.next();

    let counts = point_counts(k).expect("3 <= k <= 6");
    let map = match mode.as_str() {
        "visits" => &counts.visits,
        _ => &counts.ending,
    };
    match out {
        Some(path) => {
            write_heatmap_csv(map, &mut File::create(&path).expect("create csv"))
                .expect("write csv");
            println!("wrote {} rows to {path}", map.len());
        }
        None => {
            write_heatmap_csv(map, &mut std::io::stdout().lock()).ok();
        }
    }
    let (max_point, max_count) = map
        .iter()
        .max_by_key(|(_, &count)| count)
        .map(|(p, c)| (*p, *c))
        .unwrap_or((Point::new(0, 0), 0));
    eprintln!("peak: {max_count} walks at {max_point}");
}
