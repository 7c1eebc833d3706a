//! End-to-end tests of the `pnormcut` binary: exit codes, file outputs,
//! record contents, and byte-level determinism of the results record.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pnormcut"))
}

fn write(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_record(out: &Output) -> Value {
    let v: Value = serde_json::from_str(&stdout(out)).expect("stdout is JSON");
    v["record"].clone()
}

const K3: &str = "3 3\n1 2\n2 3\n1 3\n";
const C5: &str = "5 5\n1 2\n2 3\n3 4\n4 5\n1 5\n";

#[test]
fn maxcut_oracle_k3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let out = bin().args(["maxcut"]).arg(&g).args(["--method", "oracle", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["maxcut_rounded"], 2);
    assert_eq!(r["method"], "oracle");
}

#[test]
fn maxcut_pnorm_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.graph", K3);
    let c5 = write(dir.path(), "c5.graph", C5);

    let out = bin().arg("maxcut").arg(&k3).args(["--p", "3", "--alpha", "10", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["maxcut_rounded"], 2);
    assert_eq!(r["alpha"], "10");

    let out = bin().arg("maxcut").arg(&c5).args(["--p", "3", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["maxcut_rounded"], 4);
    // default weight for n = 5, p = 3: 64·3·5⁸ = 75,000,000
    assert_eq!(r["alpha"], "75000000");
}

#[test]
fn maxcut_small_p_uses_dual() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let out = bin().arg("maxcut").arg(&g).args(["--p", "3/2", "--alpha", "10", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["p"], "3/2");
    assert_eq!(r["solved_p"], "3");
    assert_eq!(r["maxcut_rounded"], 2);
}

#[test]
fn maxcut_rejects_p_one_and_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    for p in ["1", "2"] {
        let out = bin().arg("maxcut").arg(&g).args(["--p", p]).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "p = {p}");
    }
}

#[test]
fn build_z_writes_matrix_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let mat = dir.path().join("k3.z.mat");
    let out = bin()
        .arg("build")
        .arg(&g)
        .args(["--construction", "z", "--p", "3", "--alpha", "10", "--json", "-o"])
        .arg(&mat)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["rows"], 9);
    assert_eq!(r["cols"], 3);
    let text = fs::read_to_string(&mat).unwrap();
    assert!(text.starts_with("9 3\n"));
    let sidecar: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("k3.z.mat.meta.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["provenance"], "z");
    assert_eq!(sidecar["alpha"], "10");
    assert_eq!(sidecar["bits"], 82);
}

#[test]
fn build_zdoublestar_small_k_materializes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let mat = dir.path().join("zdd.mat");
    let out = bin()
        .arg("build")
        .arg(&g)
        .args(["--construction", "zdoublestar", "--p", "3", "--k", "8", "-o"])
        .arg(&mat)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&mat).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("51 3"));
    for line in lines {
        for tok in line.split_whitespace() {
            assert!(
                ["-1", "0", "1"].contains(&tok),
                "entry {tok} outside {{-1,0,1}}"
            );
        }
    }
}

#[test]
fn build_zdoublestar_default_k_refuses_materialization() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let out = bin()
        .arg("build")
        .arg(&g)
        .args(["--construction", "zdoublestar", "--p", "3"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--k"), "stderr: {}", stderr(&out));
}

#[test]
fn build_rejects_p_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let out = bin().arg("build").arg(&g).args(["--construction", "z", "--p", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p must exceed 2 for this construction"));
}

#[test]
fn solve_graph_inftyp_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", K3);
    let out = bin().arg("solve").arg(&g).args(["--mode", "inftyp-exact", "--p", "3", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["input_kind"], "graph");
    assert_eq!(r["certified"], true);
    let v: f64 = r["value"].as_str().unwrap().parse().unwrap();
    assert!((v - 2.0 * 2f64.powf(1.0 / 3.0)).abs() < 1e-12, "value {v}");
}

#[test]
fn solve_matrix_ascent_identity() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "id3.mat", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let out = bin().arg("solve").arg(&m).args(["--mode", "pnorm-ascent", "--p", "3", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    assert_eq!(r["input_kind"], "matrix");
    let v: f64 = r["value"].as_str().unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9, "value {v}");
}

#[test]
fn solve_gadget_signsearch_is_two() {
    let dir = tempfile::tempdir().unwrap();
    let gadget = pnormcut::gadget_matrix(5).unwrap();
    let m = write(dir.path(), "gadget5.mat", &gadget.serialize(false));
    let out = bin().arg("solve").arg(&m).args(["--mode", "pnorm-signsearch", "--p", "3", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    let v: f64 = r["value"].as_str().unwrap().parse().unwrap();
    assert!((v - 2.0).abs() < 1e-12, "value {v}");
}

#[test]
fn solve_enumeration_limit_respected() {
    let dir = tempfile::tempdir().unwrap();
    let wide = pnormcut::DenseMatrix::zeros(1, 6);
    let m = write(dir.path(), "wide.mat", &wide.serialize(false));
    let out = bin()
        .arg("solve")
        .arg(&m)
        .args(["--mode", "inftyp-exact", "--p", "3", "--limit-enum", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("enumeration"));
}

#[test]
fn verify_suite_passes_and_unknown_suite_fails() {
    let out = bin().args(["verify", "lemma4", "--seed", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("pass"));

    let out = bin().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_lists_all_suites() {
    let out = bin()
        .args(["verify", "all", "--seed", "3", "--sizes", "3,4", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(r["all_pass"], true);
}

#[test]
fn epsilons_examples() {
    let out = bin().args(["epsilons", "--p", "1", "--delta", "1", "--json"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let r = json_record(&out);
    let e: f64 = r["epsilon_inftyp"].as_str().unwrap().parse().unwrap();
    assert!((e - 1.0 / 34.0).abs() < 1e-15);
    assert!(r.get("epsilon_pnorm").is_none());

    let out = bin().args(["epsilons", "--p", "3", "--n", "3", "--json"]).output().unwrap();
    assert!(out.status.success());
    let r = json_record(&out);
    assert!(r["epsilon_pnorm"].as_str().unwrap().contains("e-28"));

    // p-norm schedule needs p > 2
    let out = bin().args(["epsilons", "--p", "2", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn results_record_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.graph", C5);
    let run = || {
        let out = bin()
            .arg("maxcut")
            .arg(&g)
            .args(["--p", "5/2", "--seed", "7", "--json"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        let mut v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["record"].as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&v).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "records differ between identical runs");

    let out = bin()
        .arg("solve")
        .arg(&g)
        .args(["--mode", "pnorm-ascent", "--p", "5/2", "--seed", "7", "--json"])
        .output()
        .unwrap();
    let mut v1: Value = serde_json::from_str(&stdout(&out)).unwrap();
    v1["record"].as_object_mut().unwrap().remove("timings");
    let out = bin()
        .arg("solve")
        .arg(&g)
        .args(["--mode", "pnorm-ascent", "--p", "5/2", "--seed", "7", "--json"])
        .output()
        .unwrap();
    let mut v2: Value = serde_json::from_str(&stdout(&out)).unwrap();
    v2["record"].as_object_mut().unwrap().remove("timings");
    assert_eq!(
        serde_json::to_string(&v1).unwrap(),
        serde_json::to_string(&v2).unwrap()
    );
}

#[test]
fn malformed_graph_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.graph", "3 2\n1 2\n");
    let out = bin().arg("maxcut").arg(&g).args(["--method", "oracle"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("expected 2 edges"), "stderr: {}", stderr(&out));
}
