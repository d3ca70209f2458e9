//! Pins the KNF emission against a vendored fixture: the klause line syntax
//! `k <bound> <literals> 0` is an external compatibility contract consumed
//! by klause-native solvers, so any byte drift is a breaking change. The
//! converter hook is checked against the fixture too.

mod common;

use grwalk::driver::{solve_instance, Dialect, SolverSpec};
use grwalk::encoding::InstanceBuilder;
use grwalk::formats::{knf_bytes, knf_to_cnf, parse_knf, SolverStatus};

const FIXTURE: &str = include_str!("fixtures/k3n5.knf");

#[test]
fn knf_emission_matches_vendored_fixture() {
    let instance = InstanceBuilder::new(3, 5).build().unwrap();
    let emitted = String::from_utf8(knf_bytes(&instance)).unwrap();
    assert_eq!(emitted, FIXTURE);
}

#[test]
fn fixture_carries_the_diagonal_klause() {
    // at-most-2 over the y=x points {1, 5, 13} becomes at-least-1 over the
    // negations
    assert!(FIXTURE.lines().any(|l| l == "k 1 -1 -5 -13 0"));
    let parsed = parse_knf(FIXTURE).unwrap();
    assert_eq!(parsed.var_count, 15);
    assert_eq!(parsed.klauses.len(), 1);
    assert_eq!(parsed.klauses[0].bound(), 1);
    assert_eq!(parsed.klauses[0].lits(), &[-1, -5, -13]);
}

#[test]
fn converted_fixture_solves_like_the_direct_encoding() {
    // n = 5 asks for a 4-step GR(3) walk, which does not exist; both the
    // converted KNF and the directly lowered CNF must agree on that
    let spec: SolverSpec = common::solver_spec();
    let parsed = parse_knf(FIXTURE).unwrap();
    let cnf = knf_to_cnf(&parsed, grwalk::formats::LoweringMethod::SequentialCounter);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("converted.cnf");
    std::fs::write(&path, cnf).unwrap();

    let raw = std::process::Command::new(common::solver_binary())
        .arg(&path)
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&raw.stdout);
    assert!(text.contains("s UNSATISFIABLE"), "no 4-step GR(3) walk exists");

    let instance = InstanceBuilder::new(3, 5).build().unwrap();
    let direct = solve_instance(&instance, &spec, Dialect::Cnf, 0).unwrap();
    assert_eq!(direct.result.status, SolverStatus::Unsat);

    // and on the satisfiable side of the boundary the KNF pipeline (through
    // the converter) finds a maximal GR(3) walk
    let sat_instance = InstanceBuilder::new(3, 4).build().unwrap();
    let via_knf = solve_instance(&sat_instance, &spec, Dialect::Knf, 0).unwrap();
    assert_eq!(via_knf.result.status, SolverStatus::Sat);
    assert_eq!(via_knf.walk.unwrap().to_string(), "NEN");
}
