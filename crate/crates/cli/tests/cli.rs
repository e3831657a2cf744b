use std::f64::consts::PI;
use std::process::{Command, Output};

use baxterise::category::{check_f_identities, CategoryData};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baxterise")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_every_family() {
    let o = run(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    for f in ["su2", "minimal", "ty", "so", "sp", "g2"] {
        assert!(text.lines().any(|l| l.starts_with(f)), "{f} missing");
    }
    let json: Value = serde_json::from_str(&stdout(&run(&["catalog", "list", "--format", "json"]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 6);
}

#[test]
fn baxterize_su2_level_four_at_mu_two() {
    let o = run(&[
        "baxterize",
        "--family",
        "su2",
        "--level",
        "4",
        "--rho",
        "1/2",
        "--phi",
        "1",
        "--mu",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["relative_to"], "1");
    let a0 = &v["evaluations"][0]["amplitudes"]["0"];
    let (re, im) = (a0[0].as_f64().unwrap(), a0[1].as_f64().unwrap());
    assert!((re - (PI / 3.0).cos()).abs() < 1e-12);
    assert!((im + (PI / 3.0).sin()).abs() < 1e-12);
}

#[test]
fn table_numbers_round_trip_through_json() {
    let args = ["baxterize", "--family", "ty", "--M", "5", "--rho", "X", "--phi", "2", "--mu", "0.7-1.3i"];
    let table = stdout(&run(&args));
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&run(&with_json))).unwrap();
    let amps = v["evaluations"][0]["amplitudes"].as_object().unwrap();
    let mut seen = 0;
    for line in table.lines().filter(|l| l.starts_with("mu=")) {
        let (lhs, value) = line.split_once(" = ").unwrap();
        let label = lhs.split("A_").nth(1).unwrap().split('/').next().unwrap();
        let z: num_complex::Complex64 = value.parse().unwrap();
        let j = &amps[label];
        assert_eq!(z.re, j[0].as_f64().unwrap());
        assert_eq!(z.im, j[1].as_f64().unwrap());
        seen += 1;
    }
    assert_eq!(seen, amps.len());
}

#[test]
fn cleared_form_is_polynomial() {
    let o = run(&[
        "baxterize",
        "--family",
        "su2",
        "--level",
        "5",
        "--rho",
        "1",
        "--phi",
        "1",
        "--cleared",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cleared"].as_object().unwrap().len(), 3);
}

#[test]
fn classify_flags_the_spin_three_halves_cycle() {
    let o = run(&["classify", "--family", "su2", "--level", "8"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("(3/2, 2)")).unwrap();
    assert!(row.contains("INCONSISTENT") && row.contains("failed cycle 1-2-3"), "{row}");
    assert!(text.lines().any(|l| l.starts_with("(3/2, 1): TREE_UNIQUE")));
}

#[test]
fn inconsistent_pair_exits_one() {
    let o = run(&["baxterize", "--family", "su2", "--level", "8", "--rho", "3/2", "--phi", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("INCONSISTENT"));
}

#[test]
fn verify_ybe_tambara_yamagami() {
    let o = run(&["verify", "ybe", "--family", "ty", "--M", "4", "--L", "3", "--samples", "25", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("[PASS] ybe TY_4"));
}

#[test]
fn every_suite_passes_on_su2_level_three() {
    for suite in ["ybe", "current", "braid", "projectors", "transfer", "loop"] {
        let o = run(&["verify", suite, "--family", "su2", "--level", "3", "--samples", "4"]);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
    }
}

#[test]
fn impossible_tolerance_is_a_verdict_failure() {
    let o = run(&["verify", "current", "--family", "su2", "--level", "3", "--tol", "1e-300"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn seeded_json_is_byte_identical() {
    let args = [
        "verify",
        "ybe",
        "--family",
        "su2",
        "--level",
        "4",
        "--rho",
        "1",
        "--samples",
        "5",
        "--seed",
        "3",
        "--format",
        "json",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["seed"], 3);
    assert_eq!(v[0]["tolerance"], 1e-8);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["baxterize", "--family", "su2"],
        vec!["baxterize", "--family", "su2", "--level", "4", "--rho", "7/2"],
        vec!["baxterize", "--family", "nope", "--level", "4"],
        vec!["classify", "--family", "su2", "--level", "4", "--frobnicate"],
        vec!["verify", "ybe", "--family", "so", "--n", "5", "--level", "2"],
        vec!["baxterize", "--family", "su2", "--level", "4", "--mu", "two"],
        vec!["verify", "transfer", "--family", "su2", "--level", "2", "--L", "12"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn export_category_round_trips() {
    let path = std::env::temp_dir().join(format!("baxterise-export-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["baxterize", "--family", "ty", "--M", "3", "--export-category", p]);
    assert_eq!(code(&o), 0);
    let cat = CategoryData::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(cat.name, "TY_3");
    assert!(check_f_identities(&cat, 1e-10).unwrap().all_pass());
}

#[test]
fn twist_only_families_solve() {
    let o = run(&["baxterize", "--family", "g2", "--level", "1", "--phi", "A", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "TREE_UNIQUE");
    assert_eq!(v["channels"].as_array().unwrap().len(), 4);
}
