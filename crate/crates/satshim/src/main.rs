//! Minimal DIMACS CNF solver binary: reads a CNF file, prints the standard
//! `s SATISFIABLE` / `s UNSATISFIABLE` status line plus `v` value lines, and
//! exits 10/20 accordingly. Serves as a stock external solver for pipelines
//! that orchestrate solver processes over files.
//!
//! Usage: satshim <file.cnf> [--seed N] [--timeout SECS]
//!
//! The seed is accepted for interface compatibility and echoed in a comment;
//! solving is deterministic. The timeout is enforced by the solver itself.

use std::io::Write;
use std::process::ExitCode;

use splr::{Certificate, Config, SatSolverIF, SolveIF, Solver, SolverError};

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let mut path: Option<String> = None;
    let mut seed: Option<u64> = None;
    let mut timeout: Option<f64> = None;
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--seed" => match args.next().map(|v| v.parse()) {
                Some(Ok(v)) => seed = Some(v),
                _ => return usage("--seed needs an integer"),
            },
            "--timeout" => match args.next().map(|v| v.parse()) {
                Some(Ok(v)) => timeout = Some(v),
                _ => return usage("--timeout needs a number of seconds"),
            },
            _ if path.is_none() => path = Some(arg),
            _ => return usage("unexpected extra argument"),
        }
    }
    let Some(path) = path else {
        return usage("missing CNF file path");
    };

    let mut config = Config::from(path.as_str());
    if let Some(secs) = timeout {
        config.c_timeout = secs;
    }
    if let Some(seed) = seed {
        println!("c seed {seed}");
    }
    let mut solver = match Solver::build(&config) {
        Ok(solver) => solver,
        Err(
            SolverError::EmptyClause
            | SolverError::Inconsistent
            | SolverError::RootLevelConflict(_),
        ) => {
            // conflict while loading the formula: unsatisfiable at level 0
            println!("s UNSATISFIABLE");
            return ExitCode::from(20);
        }
        Err(err) => {
            eprintln!("c error building solver: {err:?}");
            return ExitCode::from(1);
        }
    };
    match solver.solve() {
        Ok(Certificate::SAT(model)) => {
            let mut out = String::from("s SATISFIABLE\nv");
            for lit in model {
                out.push_str(&format!(" {lit}"));
            }
            out.push_str(" 0\n");
            print!("{out}");
            std::io::stdout().flush().ok();
            ExitCode::from(10)
        }
        Ok(Certificate::UNSAT) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(
            SolverError::EmptyClause
            | SolverError::Inconsistent
            | SolverError::RootLevelConflict(_),
        ) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(SolverError::TimeOut) => {
            println!("c timeout");
            println!("s UNKNOWN");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("c solver error: {err:?}");
            ExitCode::from(1)
        }
    }
}

fn usage(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    eprintln!("usage: satshim <file.cnf> [--seed N] [--timeout SECS]");
    ExitCode::from(1)
}
