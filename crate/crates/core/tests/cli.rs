use std::process::{Command, Output};

use serde_json::Value;

const CONJ_Q: &str = r#"{"type":"builtin","name":"conj_q","dim":4}"#;

fn hyperan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperan"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn verdict(report: &Value, op: &str) -> String {
    report["operators"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["operator"] == op)
        .unwrap_or_else(|| panic!("no {op} in report"))["verdict"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn tables_match_the_golden_files() {
    for (algebra, format, golden) in [
        (
            "quaternion",
            "json",
            include_str!("golden/quaternion_table.json"),
        ),
        (
            "quaternion",
            "csv",
            include_str!("golden/quaternion_table.csv"),
        ),
        (
            "octonion",
            "json",
            include_str!("golden/octonion_table.json"),
        ),
        ("octonion", "csv", include_str!("golden/octonion_table.csv")),
    ] {
        let text = stdout(&hyperan(&[
            "table",
            "--algebra",
            algebra,
            "--format",
            format,
        ]));
        assert_eq!(text, golden, "{algebra} {format}");
    }
}

#[test]
fn conjugate_variable_is_globally_but_not_locally_regular() {
    let report: Value =
        serde_json::from_str(&stdout(&hyperan(&["classify", "--spec-json", CONJ_Q]))).unwrap();
    assert_eq!(verdict(&report, "global_left"), "regular");
    assert_eq!(verdict(&report, "local_conj_radial"), "not_regular");
    assert_eq!(verdict(&report, "local_conj_coordinate"), "not_regular");
    assert_eq!(verdict(&report, "third_order_probe"), "not_applicable");
}

#[test]
fn random_right_polynomials_are_locally_regular_in_both_algebras() {
    for (dim, coeffs) in [
        (4, "[[0.1,0.2,-0.3,0.4],[1,0,0.5,0],[0,-0.2,0,0.3],[0.4,0,0,0],[0,0,0.1,-0.6],[0.2,0.3,0,0]]"),
        (
            8,
            "[[0.1,0,0,0,0,0,0,1],[0,1,0,0,0.5,0,0,0],[0.2,0,0,0.3,0,0,0.1,0],[0,0,0,0,1,0,0,0],[0.5,0,0.5,0,0,0,0,0],[0,0,0,0,0,0.7,0,0]]",
        ),
    ] {
        let spec = format!(r#"{{"type":"right_poly","dim":{dim},"coeffs":{coeffs}}}"#);
        let report: Value = serde_json::from_str(&stdout(&hyperan(&["classify", "--spec-json", &spec]))).unwrap();
        assert_eq!(verdict(&report, "local_conj_radial"), "regular", "dim {dim}");
        assert_eq!(verdict(&report, "local_conj_coordinate"), "regular", "dim {dim}");
    }
}

#[test]
fn spec_can_be_read_from_a_file_and_output_written_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("f.json");
    let out = dir.path().join("report.json");
    std::fs::write(&spec, CONJ_Q).unwrap();
    let printed = stdout(&hyperan(&["classify", "--spec", spec.to_str().unwrap()]));
    let written = hyperan(&[
        "classify",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(stdout(&written).is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), printed);
    assert!(!dir.path().join("report.json.partial").exists());
}

#[test]
fn residual_map_has_one_row_per_grid_point() {
    let text = stdout(&hyperan(&[
        "residual-map",
        "--spec-json",
        CONJ_Q,
        "--grid",
        "-1,1,3",
        "--exclude-axis-radius",
        "0.5",
        "--format",
        "csv",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "index,x0,x1,x2,x3,r0,r1,r2,r3,norm");
    // 3⁴ lattice points minus the 3 on the real axis
    assert_eq!(lines.count(), 81 - 3);
}

#[test]
fn explicit_tolerance_is_applied_to_every_operator() {
    let report: Value = serde_json::from_str(&stdout(&hyperan(&[
        "classify",
        "--spec-json",
        CONJ_Q,
        "--tol",
        "5",
    ])))
    .unwrap();
    for op in ["holomorphy_trio", "global_left", "crf", "local_conj_radial"] {
        assert_eq!(verdict(&report, op), "regular", "{op}");
    }
}

#[test]
fn convergence_can_be_restricted_to_one_operator() {
    let spec = r#"{"type":"canonical","axis":"j","coeffs":[[0,0],[1,0],[0,0],[0.5,0.2]]}"#;
    let table: Value = serde_json::from_str(&stdout(&hyperan(&[
        "convergence",
        "--spec-json",
        spec,
        "--op",
        "crf",
    ])))
    .unwrap();
    let ops = table["operators"].as_array().unwrap();
    assert_eq!(ops.len(), 1);
    assert_eq!(ops[0]["operator"], "crf");
}

#[test]
fn input_errors_exit_with_one() {
    for args in [
        vec![
            "classify",
            "--spec-json",
            r#"{"type":"builtin","name":"sin_q","dim":4}"#,
        ],
        vec![
            "classify",
            "--spec-json",
            r#"{"type":"right_poly","dim":5,"coeffs":[[1,0,0,0,0]]}"#,
        ],
        vec![
            "classify",
            "--spec-json",
            r#"{"type":"right_poly","dim":4,"coeffs":[[1,0,0]]}"#,
        ],
        vec!["classify", "--spec-json", "not json"],
        vec!["classify", "--spec-json", CONJ_Q, "--algebra", "octonion"],
        vec!["classify", "--spec-json", CONJ_Q, "--spec", "f.json"],
        vec!["classify", "--spec-json", CONJ_Q, "--op", "laplace"],
        vec!["classify", "--spec-json", CONJ_Q, "--grid", "0,1"],
        vec!["classify", "--spec", "/nonexistent/spec.json"],
        vec!["classify"],
        vec!["frobnicate"],
    ] {
        let out = hyperan(&args);
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn numerical_domain_errors_exit_with_two() {
    // every lattice point of a 1-point-per-axis grid at the origin is on the axis
    let out = hyperan(&["classify", "--spec-json", CONJ_Q, "--grid", "0,0,1"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn help_exits_cleanly() {
    let out = hyperan(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("residual-map"));
}
