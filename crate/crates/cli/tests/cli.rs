use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn pvcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvcoh")).args(args).env_remove("PVCOH_THREADS").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = pvcoh(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stdout));
    json_of(&out)
}

fn error(args: &[&str]) -> (i32, Value) {
    let out = pvcoh(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    (out.status.code().unwrap(), json_of(&out))
}

#[test]
fn pv_of_the_golden_tiling() {
    let v = ok(&["pv", "--alpha", "golden", "--levels", "4"]);
    assert_eq!(v["summary"]["groups"], json!(["Z", "Z^2"]));
    assert_eq!(v["summary"]["status"], json!(["Stabilized", "Stabilized"]));
    assert_eq!(v["summary"]["certificates_pass"], json!(true));
    assert_eq!(v["sequence"]["levels_built"], json!(4));
}

#[test]
fn koszul_of_a_point_in_the_plane() {
    let system = data("systems/point.json");
    let v = ok(&["koszul", "--system", system.to_str().unwrap(), "--d", "2"]);
    assert_eq!(v["summary"]["ranks"], json!([1, 2, 1]));
    assert_eq!(v["summary"]["groups"], json!(["Z", "Z^2", "Z"]));
}

#[test]
fn koszul_dimension_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.json");
    std::fs::write(&path, r#"{"point": true, "d": 1}"#).unwrap();
    let (code, v) = error(&["koszul", "--system", path.to_str().unwrap(), "--d", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "DimensionMismatch");
}

#[test]
fn verify_passes_on_quadratic_and_substitution_tilings() {
    let v = ok(&["verify", "--alpha", "silver", "--levels", "3"]);
    assert_eq!(v["all_pass"], json!(true));
    let certs = v["certificates"].as_object().unwrap();
    for name in ["pv.theta_partial_isometry", "pv.square_zero", "pv.rho_chain_map", "routes.limit", "koszul.torus_isomorphism", "spectral.cofiltration_equivalence", "cantor_circle.coboundary_invariance"] {
        assert_eq!(certs[name]["pass"], json!(true), "{name}");
    }

    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("fib.json");
    std::fs::write(&spec, r#"{"type":"substitution","rules":{"a":"ab","b":"a"},"seed":"a","iterations":16}"#).unwrap();
    let v = ok(&["verify", "--input", spec.to_str().unwrap(), "--levels", "3"]);
    assert_eq!(v["all_pass"], json!(true));
    assert!(v["certificates"].get("cantor_circle.rank_agrees").is_none());
}

#[test]
fn verify_fails_when_a_certificate_cannot_be_established() {
    let out = pvcoh(&["verify", "--alpha", "golden", "--levels", "3", "--points", "400", "--resolution", "150"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["all_pass"], json!(false));
    assert_eq!(v["certificates"]["koszul.agrees_with_pv"]["error"], "InsufficientSample");
}

#[test]
fn reports_are_byte_identical_and_output_file_matches_stdout() {
    let a = pvcoh(&["cohomology", "--alpha", "[0;2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2]", "--levels", "3"]);
    let b = pvcoh(&["cohomology", "--alpha", "[0;2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2]", "--levels", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let c = pvcoh(&["cohomology", "--alpha", "[0;2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2]", "--levels", "3", "--output", path.to_str().unwrap()]);
    assert!(c.status.success() && c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    assert_eq!(json_of(&a)["summary"]["groups"], json!(["Z", "Z^2"]));
}

#[test]
fn alpha_forms() {
    for alpha in ["golden", "silver", "0,1,1,3", "quadratic:-1,1,2,5", "cf:0,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1"] {
        let v = ok(&["generate", "--alpha", alpha, "--points", "50"]);
        assert!(v["sample"].is_object(), "{alpha}");
    }
    let (code, v) = error(&["generate", "--alpha", "bronze"]);
    assert_eq!((code, v["error"].as_str()), (1, Some("Parse")));
    let (_, v) = error(&["generate", "--alpha", "1,0,1,1"]);
    assert_eq!(v["error"], "RationalAlpha");
}

#[test]
fn usage_errors_are_json() {
    let (code, v) = error(&["generate"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("Usage")));
    let (code, v) = error(&["pv", "--alpha", "golden", "--levels", "0"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("Usage")));
    let (code, v) = error(&["frobnicate"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("Usage")));
    let (code, v) = error(&["pv", "--input", "/nonexistent/spec.json"]);
    assert_eq!((code, v["error"].as_str()), (2, Some("Io")));
    let (_, v) = error(&["pv", "--alpha", "golden", "--format", "dot"]);
    assert_eq!(v["error"], "Usage");

    let out = Command::new(env!("CARGO_BIN_EXE_pvcoh"))
        .args(["generate", "--alpha", "golden", "--points", "20"])
        .env("PVCOH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"], "Usage");
}

#[test]
fn malformed_inputs_report_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"type":"cut_and_project","alpha":"golden"}"#).unwrap();
    let (code, v) = error(&["generate", "--input", path.to_str().unwrap()]);
    assert_eq!((code, v["error"].as_str()), (1, Some("Parse")));
    std::fs::write(&path, r#"{"dim":1,"cells":{"0":["v"],"1":["e"]},"faces":{"e":["v","w"]}}"#).unwrap();
    let (_, v) = error(&["ahss", "--input", path.to_str().unwrap()]);
    assert_eq!(v["error"], "InvalidComplex");
    std::fs::write(&path, "not json").unwrap();
    let (_, v) = error(&["koszul", "--system", path.to_str().unwrap()]);
    assert_eq!(v["error"], "Parse");
}

#[test]
fn approximants_as_dot() {
    let out = pvcoh(&["approximants", "--alpha", "golden", "--levels", "3", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("digraph \"level").count(), 3, "{text}");
}

#[test]
fn cantor_circle_frequency_module() {
    let v = ok(&["cantor-circle", "--alpha", "golden"]);
    assert_eq!(v["frequency_module"]["generator_integrals"], json!(["1", "3/2 - 1/2*sqrt(5)"]));
    let approx = v["frequency_module"]["alpha_prime_approx"].as_f64().unwrap();
    assert!((approx - 0.3819660113).abs() < 1e-10);
    assert_eq!(v["h1_rank"], json!(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, r#"{"terms": [[2, [0, 3]], [1, "circle"]]}"#).unwrap();
    let v = ok(&["cantor-circle", "--alpha", "golden", "--function", path.to_str().unwrap()]);
    assert_eq!(v["function"]["normal_form"], json!({"n": "6", "m": "-1"}));
}

#[test]
fn spectral_pages_of_a_supplied_complex() {
    let path = data("complexes/projective_plane.json");
    let v = ok(&["ahss", "--input", path.to_str().unwrap()]);
    assert_eq!(v["pages"]["converged_at"], json!(2));
    assert_eq!(v["cofiltration_equivalence"]["triangle_exact"], json!(true));
    let last = v["pages"]["pages"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["entries"]["(2,0)"], json!({"rank": 0, "torsion": [2]}));
    assert!(v["pages"].get("k_groups").is_none_or(Value::is_null));

    let v = ok(&["cohomology", "--input", path.to_str().unwrap()]);
    assert_eq!(v["summary"], json!(["Z", "0", "Z/2"]));
}

#[test]
fn spectral_pages_of_the_hull() {
    // E_1 holds the cochain groups, whose ranks grow with the level, so the
    // couple itself never stabilizes; its E_2 page is the hull cohomology.
    let v = ok(&["ahss", "--alpha", "golden", "--levels", "3"]);
    assert_eq!(v["limit_status"], "NotStabilized");
    let pages = v["pages"]["pages"].as_array().unwrap();
    let e2 = pages.iter().find(|p| p["page"] == 2).unwrap_or(pages.last().unwrap());
    assert_eq!(e2["entries"]["(0,0)"], json!({"rank": 1, "torsion": []}));
    assert_eq!(e2["entries"]["(1,0)"], json!({"rank": 2, "torsion": []}));
}

#[test]
fn text_format() {
    let out = pvcoh(&["pv", "--alpha", "golden", "--levels", "3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("summary.groups.1: Z^2\n"), "{text}");
}
