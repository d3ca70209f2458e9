//! Exhaustively determine a(k) for small k with the native backtracking
//! search and report the census of maximal walks up to isomorphism.
//!
//!     cargo run --release --example enumerate_walks [max_k]
//!
//! k=3..5 finish in well under a second each; k=6 takes on the order of an
//! hour and is only attempted when explicitly requested.

use grwalk::oracle::{search_max, SearchBudget};
use grwalk::walk::dedup;

fn main() {
    let max_k: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    for k in 3..=max_k {
        let started = std::time::Instant::now();
        let outcome = search_max(k, SearchBudget::unlimited()).expect("k >= 3");
        let a_value = outcome.a_value().expect("unbudgeted search is exhaustive");
        let classes = dedup(outcome.witnesses);
        println!(
            "a({k}) = {a_value}   [{} maximal walk(s) up to isomorphism, {:.2?}]",
            classes.len(),
            started.elapsed()
        );
        for walk in &classes {
            println!("    {walk}");
        }
    }
}
