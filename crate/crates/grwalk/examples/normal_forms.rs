//! Canonicalization demo: walk the symmetry orbit of a few walks, reduce a
//! collection to normal forms, and count equivalence classes.
//!
//!     cargo run --example normal_forms [walk ...]

use grwalk::walk::dedup;
use grwalk::Walk;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let walks: Vec<Walk> = if args.is_empty() {
        ["NEN", "ENE", "NNE", "ENN", "NEENEENE", "NENNENNE"]
            .iter()
            .map(|s| s.parse().expect("valid steps"))
            .collect()
    } else {
        args.iter()
            .map(|s| s.parse().expect("walks are strings over N and E"))
            .collect()
    };

    for walk in &walks {
        println!("{walk}");
        println!("    bits        {}", walk.encode_bits());
        println!("    complement  {}", walk.complement());
        println!("    reverse     {}", walk.reverse());
        println!("    comp+rev    {}", walk.reverse().complement());
        println!("    normal form {}", walk.normal_form());
    }

    let classes = dedup(walks.iter().cloned());
    println!(
        "\n{} walks fall into {} equivalence classes:",
        walks.len(),
        classes.len()
    );
    for class in &classes {
        println!("    {class}");
    }
}
