//! End-to-end tests of the `entwit` binary.

use std::path::Path;
use std::process::{Command, Output};

fn entwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(path: &Path, content: &str) -> String {
    std::fs::write(path, content).unwrap();
    path.to_str().unwrap().to_owned()
}

const THIRD: &str = "0.5773502691896258";

/// ρ(q) = q₁ρ₁ + q₂ρ₂ + q₃ρ₃ on 3×3 as a five-term mixture file.
fn qutrit_state_json(q1: f64, q2: f64) -> String {
    let q3 = 1.0 - q1 - q2;
    let zero9 = |set: &[(usize, &str)]| {
        let mut cells = vec!["[0,0]".to_string(); 9];
        for (i, v) in set {
            cells[*i] = format!("[{v},0]");
        }
        format!("[{}]", cells.join(","))
    };
    let w1 = zero9(&[(0, THIRD), (4, THIRD), (8, THIRD)]);
    let w2 = zero9(&[(1, THIRD), (5, THIRD), (6, THIRD)]);
    let b02 = zero9(&[(2, "1")]);
    let b10 = zero9(&[(3, "1")]);
    let b21 = zero9(&[(7, "1")]);
    format!(
        r#"{{"kind":"mixture","dims":[3,3],"terms":[
            {{"weight":{q1},"coeffs":{w1}}},
            {{"weight":{q2},"coeffs":{w2}}},
            {{"weight":{t},"coeffs":{b02}}},
            {{"weight":{t},"coeffs":{b10}}},
            {{"weight":{t},"coeffs":{b21}}}]}}"#,
        t = q3 / 3.0
    )
}

#[test]
fn check_reports_margins_for_qutrit_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(&dir.path().join("state.json"), &qutrit_state_json(0.2, 0.1));
    let out = entwit(&["check", &state, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["criterion"], "ppt");
    assert_eq!(reports[0]["verdict"], "not-detected");
    let ppt_margin = reports[0]["margin"].as_f64().unwrap();
    assert!((ppt_margin - 0.011323797458872).abs() < 1e-12);
    assert_eq!(reports[1]["criterion"], "realignment");
    assert_eq!(reports[1]["verdict"], "detected");
}

#[test]
fn check_rejects_bad_weight_sum_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"kind":"mixture","dims":[2,2],"terms":[
        {"weight":0.5,"coeffs":[[1,0],[0,0],[0,0],[0,0]]},
        {"weight":0.4,"coeffs":[[0,0],[0,0],[0,0],[1,0]]}]}"#;
    let state = write(&dir.path().join("bad.json"), json);
    let out = entwit(&["check", &state]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("weights sum 0.9"), "{}", stderr(&out));
}

#[test]
fn check_reports_parse_errors_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        &dir.path().join("broken.json"),
        "{\"kind\":\"mixture\",\n  \"dim\": [2,2]}",
    );
    let out = entwit(&["check", &state]);
    assert_eq!(out.status.code(), Some(2));
    // serde names the unknown field and the line it sits on
    let err = stderr(&out);
    assert!(err.contains("dim") && err.contains("line"), "{err}");
}

#[test]
fn check_dense_product_state() {
    let dir = tempfile::tempdir().unwrap();
    // |01⟩⟨01| on 2×2
    let mut rows = vec![vec!["[0,0]".to_string(); 4]; 4];
    rows[1][1] = "[1,0]".into();
    let matrix = rows
        .iter()
        .map(|r| format!("[{}]", r.join(",")))
        .collect::<Vec<_>>()
        .join(",");
    let json = format!(r#"{{"kind":"dense","dims":[2,2],"matrix":[{matrix}]}}"#);
    let state = write(&dir.path().join("prod.json"), &json);
    let out = entwit(&["check", &state, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for rep in v["reports"].as_array().unwrap() {
        assert_eq!(rep["verdict"], "not-detected");
    }
    let re_margin = v["reports"][1]["margin"].as_f64().unwrap();
    assert!(re_margin.abs() < 1e-10);
}

#[test]
fn sequence_state_truncates_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"kind":"sequence-mixture","terms":[
        {"weight":0.65,"family":"inverse-linear","shift":0},
        {"weight":0.2,"family":"inverse-linear","shift":1},
        {"weight":0.15,"family":"inverse-linear","shift":2}]}"#;
    let state = write(&dir.path().join("seq.json"), json);
    let out = entwit(&["check", &state, "--truncate", "16", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["truncation"]["n"], 16);
    assert_eq!(v["truncation"]["dims"][0], 18);
    assert_eq!(v["truncation"]["dims"][1], 16);

    // corollary witness from the same family, evaluated against it
    let wpath = dir.path().join("w.json").to_str().unwrap().to_owned();
    let out = entwit(&[
        "witness", "construct", &state, "--corollary", "--k0", "1", "--truncate", "16", "--out",
        &wpath, "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let alpha = v["alpha"].as_f64().unwrap();
    assert!((alpha - 0.6079271018540267).abs() < 1e-15);
    assert_eq!(v["report"]["verdict"], "detected");

    let out = entwit(&["witness", "evaluate", &state, "--witness", &wpath, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!((value - (0.6079271018540267 - 0.65)).abs() < 1e-9, "{value}");
}

#[test]
fn corollary_construction_on_cyclic_family() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(&dir.path().join("cyc.json"), &cyclic_state_json(0.4, 0.3, 0.3));
    let wpath = dir.path().join("w.json").to_str().unwrap().to_owned();
    let out = entwit(&[
        "witness", "construct", &state, "--corollary", "--k0", "1", "--out", &wpath, "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["alpha"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["terms"], 1);
    let margin = v["report"]["margin"].as_f64().unwrap();
    assert!((margin - (1.0 / 3.0 - 0.4)).abs() < 1e-12);
}

/// Cyclic-basis mixture (the n = 3 shifted maximally entangled family).
fn cyclic_state_json(q1: f64, q2: f64, q3: f64) -> String {
    let zero9 = |set: &[usize]| {
        let mut cells = vec!["[0,0]".to_string(); 9];
        for i in set {
            cells[*i] = format!("[{THIRD},0]");
        }
        format!("[{}]", cells.join(","))
    };
    let w1 = zero9(&[0, 4, 8]);
    let w2 = zero9(&[1, 5, 6]);
    let w3 = zero9(&[2, 3, 7]);
    format!(
        r#"{{"kind":"mixture","dims":[3,3],"terms":[
            {{"weight":{q1},"coeffs":{w1}}},
            {{"weight":{q2},"coeffs":{w2}}},
            {{"weight":{q3},"coeffs":{w3}}}]}}"#
    )
}

#[test]
fn witness_roundtrip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(&dir.path().join("state.json"), &qutrit_state_json(0.2, 0.1));
    let wpath = dir.path().join("w.json").to_str().unwrap().to_owned();
    let out = entwit(&[
        "witness", "construct", &state, "--search", "--out", &wpath, "--restarts", "24", "--seed",
        "5", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // reloading the file and evaluating twice must agree to the bit
    let e1 = entwit(&["witness", "evaluate", &state, "--witness", &wpath, "--json"]);
    let e2 = entwit(&["witness", "evaluate", &state, "--witness", &wpath, "--json"]);
    assert_eq!(stdout(&e1), stdout(&e2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&e1)).unwrap();
    assert!(v["value"].as_f64().unwrap() < -1e-3);
}

#[test]
fn certify_is_deterministic_under_seed() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(&dir.path().join("cyc.json"), &cyclic_state_json(0.4, 0.3, 0.3));
    let wpath = dir.path().join("w.json").to_str().unwrap().to_owned();
    let out = entwit(&[
        "witness", "construct", &state, "--corollary", "--k0", "1", "--out", &wpath,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let c1 = entwit(&[
        "witness", "certify", "--witness", &wpath, "--seed", "9", "--restarts", "32", "--out",
        dir.path().join("c1.json").to_str().unwrap(), "--json",
    ]);
    let c2 = entwit(&[
        "witness", "certify", "--witness", &wpath, "--seed", "9", "--restarts", "32", "--out",
        dir.path().join("c2.json").to_str().unwrap(), "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&c1), stdout(&c2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&c1)).unwrap();
    assert!(v["infimum"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(v["certified"], true);
}

#[test]
fn reproduce_exit_codes() {
    let out = entwit(&["reproduce", "3.4", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);

    // 3.5 contains the realignment-threshold row, which does not
    // reproduce; the command reports it and exits nonzero
    let out = entwit(&["reproduce", "3.5", "--restarts", "32"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("‖ρ^R‖₁ < 1"), "{text}");

    let out = entwit(&["reproduce", "9.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geometric_family_parses() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{"kind":"sequence-mixture","terms":[
        {"weight":1.0,"family":"geometric(0.5)","shift":1}]}"#;
    let state = write(&dir.path().join("geo.json"), json);
    let out = entwit(&["check", &state, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // tail bound < 1e-10 is reachable for geometric decay: n = 17
    assert_eq!(v["truncation"]["n"], 17);
    assert!(v["truncation"]["tail_bound"].as_f64().unwrap() < 1e-10);

    let bad = write(
        &dir.path().join("bad.json"),
        r#"{"kind":"sequence-mixture","terms":[{"weight":1.0,"family":"harmonic","shift":0}]}"#,
    );
    let out = entwit(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("family"), "{}", stderr(&out));
}
