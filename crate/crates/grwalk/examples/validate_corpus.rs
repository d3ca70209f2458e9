//! Validate every walk in a corpus file against the k-collinearity rule and
//! name the violating lines.
//!
//!     cargo run --example validate_corpus <k> <corpus-file>
//!
//! The corpus format is one walk per line over {N, E}; lines starting with
//! '#' are comments.

use std::fs::File;
use std::io::BufReader;

use grwalk::walk::read_corpus;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: u32 = args
        .next()
        .and_then(|s| s.parse().ok())
        .expect("usage: validate_corpus <k> <corpus-file>");
    let path = args.next().expect("usage: validate_corpus <k> <corpus-file>");

    let walks = read_corpus(BufReader::new(File::open(&path).expect("open corpus")))
        .expect("parse corpus");
    let mut valid = 0usize;
    for (idx, walk) in walks.iter().enumerate() {
        let report = walk.validate(k).expect("k >= 3");
        if report.is_empty() {
            valid += 1;
        } else {
            println!("walk {} ({walk}):", idx + 1);
            for (line, count) in report.violations() {
                println!("    {count} points on {line}");
            }
        }
    }
    println!(
        "{valid}/{} walks avoid {k} collinear points",
        walks.len()
    );
    std::process::exit(if valid == walks.len() { 0 } else { 1 });
}
