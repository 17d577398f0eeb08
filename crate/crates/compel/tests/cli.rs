//! CLI surface tests: subcommand routing, exit codes, and byte-stable
//! reports.

use compel::cli::{self, EXIT_INVALID, EXIT_OK};
use std::path::PathBuf;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> (i32, Option<compel::report::RunReport>) {
    let mut argv = vec!["compel"];
    argv.extend_from_slice(args);
    let (code, report, _) = cli::dispatch(argv.iter().copied());
    (code, report)
}

#[test]
fn check_reports_counterexample() {
    let spec = fixture("z2.json");
    let (code, report) = run(&["check", "--spec", &spec]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["almost_elliptic"], serde_json::json!(false));
    assert_eq!(v["per_component"]["1"], serde_json::json!(true));
    assert_eq!(v["per_component"]["s"], serde_json::json!(false));
}

#[test]
fn check_condition_flags() {
    let spec = fixture("z2.json");
    for cond in ["b", "c", "d"] {
        let (code, report) = run(&["check", "--spec", &spec, "--condition", cond]);
        assert_eq!(code, EXIT_OK);
        let v = report.unwrap().verdicts;
        assert_eq!(v["almost_elliptic"], serde_json::json!(false), "condition {cond}");
    }
}

#[test]
fn audit_agrees_componentwise() {
    let spec = fixture("z2.json");
    let (code, report) = run(&["audit", "--spec", &spec]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["agree"], serde_json::json!(true));
    assert_eq!(v["disagreements"], serde_json::json!([]));
}

#[test]
fn reduce_identity_component() {
    let spec = fixture("z2.json");
    let (code, report) = run(&["reduce", "--spec", &spec, "--component", "1"]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["almost_elliptic"], serde_json::json!(true));
    assert_eq!(v["subgroup_order"], serde_json::json!(1));
    let (code, _) = run(&["reduce", "--spec", &spec, "--component", "zzz"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn classify_catalog_via_cli() {
    for (file, expected) in [("heisenberg.json", false), ("e2.json", true), ("sl2.json", true)] {
        let algebra = fixture(file);
        let (code, report) = run(&["classify-A", "--algebra", &algebra]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(report.unwrap().verdicts["verdict"], serde_json::json!(expected));
    }
}

#[test]
fn series_dims() {
    let algebra = fixture("e2.json");
    let (code, report) = run(&["series", "--algebra", &algebra, "--kind", "derived"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["dims"], serde_json::json!([3, 2, 0]));
    let (code, report) = run(&["series", "--algebra", &algebra, "--kind", "lower-central"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["dims"], serde_json::json!([3, 2, 2]));
}

#[test]
fn splice_on_heisenberg() {
    let algebra = fixture("heisenberg.json");
    let j = fixture("subspaces/h3-full.json");
    let k = fixture("subspaces/h3-center.json");
    let (code, report) = run(&["splice", "--algebra", &algebra, "--j", &j, "--k", &k]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["hypotheses_hold"], serde_json::json!(true));
    assert_eq!(v["conclusion_holds"], serde_json::json!(true));
}

#[test]
fn chain_and_fg_scalar_commands() {
    let (code, report) = run(&["chain", "--z", "3/5+4/5*i", "--chain-bound", "6"]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["verdict"], serde_json::json!("not_stabilized_by_bound"));
    assert_eq!(v["fg_criterion"], serde_json::json!(false));

    let (code, report) = run(&["fg", "--z", "i"]);
    assert_eq!(code, EXIT_OK);
    let v = report.unwrap().verdicts;
    assert_eq!(v["fg"], serde_json::json!(true));
    assert_eq!(v["root_of_unity"], serde_json::json!(true));

    // Abstract scalar literal.
    let (code, report) = run(&[
        "fg",
        "--z",
        r#"{"minpoly": [2, -3, 2], "root_box": [0, 1, 0, 1]}"#,
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["fg"], serde_json::json!(false));
}

#[test]
fn validate_paths() {
    let spec = fixture("z2.json");
    let (code, report) = run(&["validate", "--spec", &spec]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["ok"], serde_json::json!(true));

    let algebra = fixture("sl2.json");
    let (code, _) = run(&["validate", "--algebra", &algebra]);
    assert_eq!(code, EXIT_OK);

    // Jacobi violation -> exit 2 with the violating triple named.
    let dir = std::env::temp_dir().join("compel-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad-algebra.json");
    std::fs::write(
        &bad,
        r#"{"dim": 3, "basis": ["x", "y", "z"],
            "brackets": [{"i": 0, "j": 1, "coeffs": {"z": "1"}},
                         {"i": 0, "j": 2, "coeffs": {"x": "1"}}]}"#,
    )
    .unwrap();
    let (code, report) = run(&["validate", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    let diag = report.unwrap().verdicts["diagnostic"].as_str().unwrap().to_string();
    assert!(diag.contains("Jacobi"), "{diag}");

    // Weight-compatibility violation in a spec file.
    let bad_spec = dir.join("bad-spec.json");
    std::fs::write(
        &bad_spec,
        r#"{
            "torus_rank": 1,
            "weights": [[1], [-1]],
            "components": [
                {"label": "1", "torus_aut": [[1]], "rep_matrix": [["1", "0"], ["0", "1"]]},
                {"label": "s", "torus_aut": [[-1]], "rep_matrix": [["1", "0"], ["0", "1"]]}
            ],
            "component_table": [[0, 1], [1, 0]]
        }"#,
    )
    .unwrap();
    let (code, report) = run(&["validate", "--spec", bad_spec.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    let diag = report.unwrap().verdicts["diagnostic"].as_str().unwrap().to_string();
    assert!(diag.contains("weight"), "{diag}");
}

#[test]
fn sim_commands() {
    let (code, report) = run(&["sim", "orbit", "--theta", "1/4", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["max_gap"], serde_json::json!(0.25));

    let spec = fixture("z2.json");
    let (code, report) = run(&[
        "sim",
        "ellipticity",
        "--spec",
        &spec,
        "--samples",
        "40",
        "--delta",
        "0.1",
        "--seed",
        "5",
    ]);
    assert_eq!(code, EXIT_OK);
    let report = report.unwrap();
    assert_eq!(report.seed, Some(5));
    assert_eq!(report.verdicts["verdict"], serde_json::json!(false));
    assert_eq!(report.verdicts["symbolic_almost_elliptic"], serde_json::json!(false));

    let (code, report) = run(&["sim", "fg-witness", "--z", "0,1", "--exponents", "1,2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["discrete"], serde_json::json!(true));
}

#[test]
fn reports_are_byte_stable() {
    let spec = fixture("z2.json");
    let (_, r1) = run(&["check", "--spec", &spec]);
    let (_, r2) = run(&["check", "--spec", &spec]);
    assert_eq!(r1.unwrap().to_json_string(), r2.unwrap().to_json_string());

    let (_, r1) = run(&["sim", "ellipticity", "--spec", &spec, "--samples", "20", "--seed", "3"]);
    let (_, r2) = run(&["sim", "ellipticity", "--spec", &spec, "--samples", "20", "--seed", "3"]);
    assert_eq!(r1.unwrap().to_json_string(), r2.unwrap().to_json_string());
}

#[test]
fn verdict_false_is_exit_zero_not_error() {
    // The exit-code contract: a computed "false" is still success.
    let spec = fixture("trivial-action.json");
    let (code, report) = run(&["check", "--spec", &spec]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report.unwrap().verdicts["almost_elliptic"], serde_json::json!(false));
}
