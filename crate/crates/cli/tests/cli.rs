use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mposym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mposym")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mposym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data_file(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn omega(report: &Value, a: u64, b: u64, c: u64) -> (f64, f64) {
    let e = report["data"]["associator"]["omega"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["a"] == a && e["b"] == b && e["c"] == c)
        .unwrap();
    (e["re"].as_f64().unwrap(), e["im"].as_f64().unwrap())
}

#[test]
fn analyze_czy_gives_semion_class_and_module_table() {
    let o = mposym(&["analyze", "--builtin", "czy", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json_of(&o);
    let (re, im) = omega(&r, 1, 1, 1);
    assert!((re + 1.0).abs() < 1e-9 && im.abs() < 1e-9);
    let (re, _) = omega(&r, 0, 1, 1);
    assert!((re - 1.0).abs() < 1e-9);
    assert_eq!(r["data"]["associator"]["class_label"], "nontrivial");
    let rows = r["data"]["dual"]["modules"].as_array().unwrap();
    let shape: Vec<(u64, u64, u64, &str, &str)> = rows
        .iter()
        .map(|m| {
            (
                m["dim"].as_u64().unwrap(),
                m["multiplicity"].as_u64().unwrap(),
                m["rad_dim"].as_u64().unwrap(),
                m["rad"].as_str().unwrap(),
                m["quotient"].as_str().unwrap(),
            )
        })
        .collect();
    assert_eq!(shape, vec![(3, 1, 2, "P1", "S0"), (2, 1, 1, "S0", "S1"), (2, 2, 0, "0", "S2")]);
    assert_eq!(r["data"]["wedderburn_blocks"], serde_json::json!([2, 2]));
}

#[test]
fn analyze_onsite_z2_is_trivial() {
    let o = mposym(&["analyze", "--family", &data_file("z2_onsite.json"), "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = json_of(&o);
    assert_eq!(r["data"]["associator"]["class_label"], "trivial");
}

#[test]
fn analyze_is_seed_independent_up_to_gauge() {
    let a = json_of(&mposym(&["analyze", "--builtin", "czy", "--json"]));
    let b = json_of(&mposym(&["analyze", "--builtin", "czy", "--seed", "7", "--json"]));
    for key in ["associator", "lambda", "coLambda", "unit", "wedderburn_blocks", "rep_a_fusion"] {
        assert_eq!(a["data"][key], b["data"][key], "{key}");
    }
    assert_eq!(a["data"]["dual"]["modules"], b["data"]["dual"]["modules"]);
    assert_eq!(a["data"]["dual"]["fusion"], b["data"]["dual"]["fusion"]);
}

#[test]
fn reports_are_byte_identical_for_identical_runs() {
    let a = mposym(&["reproduce-paper", "--only", "associator,modules", "--json"]);
    let b = mposym(&["reproduce-paper", "--only", "associator,modules", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fusion_file_feeds_associator() {
    let fusion = scratch("fusion.json");
    let omega_out = scratch("omega.json");
    let o = mposym(&["fusion", "--builtin", "z2-cocycle-nontrivial", "--out", fusion.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = mposym(&["associator", "--fusion", fusion.to_str().unwrap(), "--out", omega_out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&omega_out).unwrap()).unwrap();
    assert_eq!(w["class_label"], "nontrivial");
}

#[test]
fn solver_recovers_czy_without_fixtures() {
    let fusion = scratch("czy_fusion.json");
    assert_eq!(code(&mposym(&["fusion", "--builtin", "czy", "--out", fusion.to_str().unwrap()])), 0);
    let f: Value = serde_json::from_str(&std::fs::read_to_string(&fusion).unwrap()).unwrap();
    let family = scratch("czy_family.json");
    std::fs::write(&family, f["family"].to_string()).unwrap();
    let r = json_of(&mposym(&["analyze", "--family", family.to_str().unwrap(), "--json"]));
    assert_eq!(r["data"]["associator"]["class_label"], "nontrivial");
}

#[test]
fn perturbed_family_fails_at_fusion() {
    let fusion = scratch("czy_fusion_p.json");
    assert_eq!(code(&mposym(&["fusion", "--builtin", "czy", "--out", fusion.to_str().unwrap()])), 0);
    let mut f: Value = serde_json::from_str(&std::fs::read_to_string(&fusion).unwrap()).unwrap();
    let entries = f["family"]["tensors"][1]["entries"].as_array_mut().unwrap();
    entries.push(serde_json::json!({"i": 0, "j": 0, "alpha": 0, "beta": 1, "re": 1e-3, "im": 0.0}));
    let family = scratch("czy_family_p.json");
    std::fs::write(&family, f["family"].to_string()).unwrap();
    let o = mposym(&["analyze", "--family", family.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage 'fusion'"));
}

#[test]
fn rep_decompose_writes_table() {
    let out = scratch("table.json");
    let o = mposym(&["rep", "decompose", "--algebra", "czy-dual", "--unitize", "--catalog", "auto", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(t["dim"], 9);
    assert_eq!(t["radical_dim"], 3);
}

#[test]
fn rfp_build_then_verify() {
    let m = scratch("m.json");
    let o = mposym(&["rfp", "build", "--algebra", "czy", "--psi", "psi_S1+psi_S2", "--out", m.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = mposym(&["rfp", "verify", "--tensor", m.to_str().unwrap(), "--nmax", "3", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = json_of(&o);
    for c in r["data"]["contracted"].as_array().unwrap() {
        assert!((c["trace"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn cocycle_emits_parsable_prebialgebra() {
    let out = scratch("g.json");
    let o = mposym(&["cocycle", "--group", "z2", "--omega", "nontrivial", "--emit", "prebialgebra", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let p = mposym::io::parse_prebialgebra(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(p.dim(), 8);
}

#[test]
fn models_czy_checks_pass() {
    let o = mposym(&["models", "czy", "--n", "4", "--check", "all"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn only_filter_restricts_suite() {
    let r = json_of(&mposym(&["reproduce-paper", "--only", "app_a", "--json"]));
    let checks = r["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["tag"] == "app_a"));
}

#[test]
fn quoted_positivity_witness_fails_with_code_2() {
    let o = mposym(&["reproduce-paper", "--only", "positivity", "--json"]);
    assert_eq!(code(&o), 2);
    let r = json_of(&o);
    let failed: Vec<&str> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] != "pass").map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("quoted y"));
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(code(&mposym(&["--tol", "-1", "models", "czy"])), 3);
    assert_eq!(code(&mposym(&["--cap", "4", "models", "czy"])), 3);
    assert_eq!(code(&mposym(&["reproduce-paper", "--only", "bogus"])), 3);
    assert_eq!(code(&mposym(&["analyze", "--builtin", "nope"])), 3);
    assert_eq!(code(&mposym(&["rfp", "verify", "--tensor", "/nonexistent/m.json"])), 3);
    assert_eq!(code(&mposym(&["frobnicate"])), 3);
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"d_out": 2, "d_in": 2, "bond": 1, "entries": [{"i": 5, "j": 0, "alpha": 0, "beta": 0, "re": 1}]}"#).unwrap();
    assert_eq!(code(&mposym(&["rfp", "verify", "--tensor", bad.to_str().unwrap()])), 3);
}
