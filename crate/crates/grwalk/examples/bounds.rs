//! Print the closed-form length bounds bracketing the k-collinearity
//! problem, for a range of k.
//!
//!     cargo run --example bounds [max_k]

use grwalk::geometry::{prop1_slope_bounds, theoretical_bounds};

fn main() {
    let max_k: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    println!(
        "{:>3}  {:>28}  {:>12}  {:>6}  slope band",
        "k", "unavoidable at length", "lower value", "steps"
    );
    for k in 3..=max_k {
        let bounds = theoretical_bounds(k).expect("k >= 3");
        let band = prop1_slope_bounds(k).expect("k >= 3");
        println!(
            "{k:>3}  {:>28}  {:>12.6}  {:>6}  {band}",
            bounds.upper.to_string(),
            bounds.lower_value,
            bounds.lower_steps,
        );
    }
    println!();
    println!("The gap is enormous: already for k=3 the upper bound is 2^131073");
    println!("while four steps suffice to force three collinear points.");
}
