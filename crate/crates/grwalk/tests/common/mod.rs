//! Shared helpers for integration tests that drive an external solver.
#![allow(dead_code)] // each test target uses a subset of these helpers

use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Duration;

use grwalk::driver::SolverSpec;

/// Locate the bundled DIMACS solver binary, building it if this test target
/// was compiled without it (e.g. `cargo test -p grwalk`).
pub fn solver_binary() -> PathBuf {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let mut dir = std::env::current_exe().expect("test executable path");
        dir.pop(); // deps/
        if dir.ends_with("deps") {
            dir.pop();
        }
        let candidate = dir.join(format!("satshim{}", std::env::consts::EXE_SUFFIX));
        if !candidate.exists() {
            let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
            let status = Command::new(cargo)
                .args(["build", "-p", "satshim"])
                .status()
                .expect("spawn cargo build -p satshim");
            assert!(status.success(), "failed to build the bundled solver");
        }
        assert!(
            candidate.exists(),
            "bundled solver not found at {}",
            candidate.display()
        );
        candidate
    })
    .clone()
}

pub fn solver_spec() -> SolverSpec {
    SolverSpec::new(format!(
        "{} {{cnf}} --seed {{seed}} --timeout {{timeout}}",
        solver_binary().display()
    ))
    .timeout(Duration::from_secs(300))
    .width(4)
}
