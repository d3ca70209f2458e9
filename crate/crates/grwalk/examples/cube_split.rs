//! Cube-and-conquer splitting: fix the walk's crossing point on one
//! antidiagonal, yielding disjoint subproblems that partition the search
//! space. Writes the base CNF and an iCNF cube file.
//!
//!     cargo run --example cube_split <k> <n> <antidiagonal> [out_prefix]

use std::fs::File;

use grwalk::driver::generate_antidiagonal_cubes;
use grwalk::formats::{write_cubes, write_dimacs, LoweringMethod};
use grwalk::InstanceBuilder;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let n: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(9);
    let c: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(n / 2 - 1);
    let prefix = args.next().unwrap_or_else(|| "split".into());

    let instance = InstanceBuilder::new(k, n).build().expect("valid k, n");
    let cubes = generate_antidiagonal_cubes(&instance, c).expect("antidiagonal in range");
    println!(
        "antidiagonal {c} of the {n}-point region: {} unblocked crossing points",
        cubes.len()
    );

    let cnf_path = format!("{prefix}.cnf");
    write_dimacs(
        &instance,
        LoweringMethod::SequentialCounter,
        &mut File::create(&cnf_path).expect("create cnf"),
    )
    .expect("write cnf");
    let cube_path = format!("{prefix}.icnf");
    write_cubes(&cubes, &mut File::create(&cube_path).expect("create cubes"))
        .expect("write cubes");
    println!("wrote {cnf_path} and {cube_path}");
    println!("each cube is one positive literal; solvers consume them as unit assumptions");
}
