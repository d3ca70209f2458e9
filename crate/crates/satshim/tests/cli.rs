//! End-to-end checks of the solver front-end's output conventions and exit
//! codes.

use std::process::Command;

fn solve(cnf: &str, extra: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("t.cnf");
    std::fs::write(&path, cnf).expect("write cnf");
    let output = Command::new(env!("CARGO_BIN_EXE_satshim"))
        .arg(&path)
        .args(extra)
        .output()
        .expect("run satshim");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
    )
}

#[test]
fn satisfiable_instance() {
    let (code, stdout) = solve("p cnf 3 3\n1 -2 0\n2 3 0\n-1 0\n", &["--seed", "7"]);
    assert_eq!(code, 10);
    assert!(stdout.contains("s SATISFIABLE"));
    let values = stdout
        .lines()
        .find(|l| l.starts_with("v "))
        .expect("value line");
    assert!(values.ends_with(" 0"));
    assert!(stdout.contains("c seed 7"));
}

#[test]
fn unsatisfiable_instance() {
    let (code, stdout) = solve("p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n", &[]);
    assert_eq!(code, 20);
    assert!(stdout.contains("s UNSATISFIABLE"));
}

#[test]
fn contradictory_units_unsat_at_load() {
    let (code, stdout) = solve("p cnf 1 2\n1 0\n-1 0\n", &[]);
    assert_eq!(code, 20);
    assert!(stdout.contains("s UNSATISFIABLE"));
}

#[test]
fn missing_file_is_an_error() {
    let output = Command::new(env!("CARGO_BIN_EXE_satshim"))
        .arg("/nonexistent/file.cnf")
        .output()
        .expect("run satshim");
    assert_eq!(output.status.code(), Some(1));
}
