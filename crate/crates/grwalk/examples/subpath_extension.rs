//! Subpath extension: emit instances asserting that a fixed step string
//! occurs somewhere in an n-point walk, the encoding used to grow long walks
//! around a promising common fragment.
//!
//!     cargo run --example subpath_extension [steps] [n]
//!
//! The default subpath is the unique maximal GR(5) walk; with n = 29 the
//! instance is satisfiable and with n = 30 it is not (no 29-step GR(5) walk
//! exists at all), which a solver run over the two emitted files confirms.

use std::fs::File;

use grwalk::formats::{write_dimacs, LoweringMethod};
use grwalk::{InstanceBuilder, Walk};

const MAXIMAL_GR5: &str = "NNENNNENNNENNNEEENEEENEEENEE";

fn main() {
    let mut args = std::env::args().skip(1);
    let subpath: Walk = args
        .next()
        .unwrap_or_else(|| MAXIMAL_GR5.into())
        .parse()
        .expect("subpath over N and E");
    let n: u32 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(subpath.len() as u32 + 1);
    let k: u32 = 5;

    for points in [n, n + 1] {
        let instance = InstanceBuilder::new(k, points)
            .subpath(subpath.clone())
            .build()
            .expect("subpath fits");
        let path = format!("extend_n{points}.cnf");
        write_dimacs(
            &instance,
            LoweringMethod::SequentialCounter,
            &mut File::create(&path).expect("create file"),
        )
        .expect("write file");
        println!(
            "wrote {path}: {} vars total ({} step vars, {} placement vars)",
            instance.var_count(),
            points - 1,
            points - subpath.len() as u32
        );
    }
}
