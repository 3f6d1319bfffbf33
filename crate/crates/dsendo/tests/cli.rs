use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn dsendo(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsendo")).args(args).arg("--config").arg(config).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn describe_a1_and_c2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a1.json", r#"{"group": "A1-sc"}"#);
    let out = dir.path().join("d.json");
    let o = dsendo(&["describe", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&out);
    assert_eq!(r["describe"]["weyl_order"], 2);
    assert_eq!(r["describe"]["h1_order"], 2);
    assert_eq!(r["describe"]["rigid_component_order"], 4);

    let cfg = write_config(dir.path(), "c2.json", r#"{"group": "C2-sc"}"#);
    let o = dsendo(&["describe", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["describe"]["weyl_order"], 8);
    assert_eq!(r["describe"]["pure_component_invariants"], serde_json::json!([2, 2]));
}

#[test]
fn describe_output_reparses_as_explicit_config() {
    let dir = tempfile::tempdir().unwrap();
    for fam in ["A1-sc", "C2-adj", "G2"] {
        let cfg = write_config(dir.path(), "in.json", &format!(r#"{{"group": "{fam}"}}"#));
        let first = dir.path().join("first.json");
        let second = dir.path().join("second.json");
        assert_eq!(dsendo(&["describe", "--out", first.to_str().unwrap()], &cfg).status.code(), Some(0));
        let r = report(&first);
        assert!(r["group"]["roots"].is_array(), "explicit lattice data expected");
        let o = dsendo(&["describe", "--out", second.to_str().unwrap()], &first);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(report(&first), report(&second));
        assert_eq!(dsendo(&["packet"], &first).status.code(), Some(0));
    }
}

#[test]
fn malformed_rational_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{\n  \"group\": \"A1-sc\",\n  \"lambda\": [\"3/0\"]\n}\n");
    let o = dsendo(&["describe"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("3/0") && e.contains("line 3"), "{e}");
}

#[test]
fn a1_packet_pairings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a1.json", r#"{"group": "A1-sc", "lambda": ["1"], "s": ["1/2"]}"#);
    let out = dir.path().join("p.json");
    let o = dsendo(&["packet", "--out", out.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let members = report(&out)["packet"]["members"].as_array().unwrap().clone();
    let pairings: Vec<i64> = members.iter().map(|m| m["pairing"].as_i64().unwrap()).collect();
    assert_eq!(pairings, vec![1, -1]);
}

#[test]
fn irregular_parameter_names_the_coroot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "z.json", r#"{"group": "A1-sc", "lambda": ["0"]}"#);
    let o = dsendo(&["packet"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("irregular") && stderr(&o).contains("coroot [1]"), "{}", stderr(&o));
}

#[test]
fn c2_packet_has_four_distinct_classes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c2.json", r#"{"group": "C2-sc"}"#);
    let out = dir.path().join("p.json");
    assert_eq!(dsendo(&["packet", "--out", out.to_str().unwrap()], &cfg).status.code(), Some(0));
    let members = report(&out)["packet"]["members"].as_array().unwrap().clone();
    assert_eq!(members.len(), 4);
    let classes: std::collections::BTreeSet<String> = members.iter().map(|m| m["class"].to_string()).collect();
    assert_eq!(classes.len(), 4);
}

#[test]
fn verify_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a1.json", r#"{"group": "A1-sc", "lambda": ["1"], "s": ["1/2"], "samples": 200, "seed": 7}"#);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let o = dsendo(&["verify", "--tol", "1e-8", "--out", a.to_str().unwrap()], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    assert_eq!(dsendo(&["verify", "--tol", "1e-8", "--out", b.to_str().unwrap()], &cfg).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r = report(&a);
    assert_eq!(r["verification"]["samples"].as_array().unwrap().len(), 200);
    assert_eq!(r["verification"]["seed"], 7);
    let max = r["verification"]["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["residual"].as_f64().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(r["verification"]["max_residual"].as_f64().unwrap(), max);

    // A different seed changes the samples.
    let c = dir.path().join("c.json");
    assert_eq!(dsendo(&["verify", "--seed", "8", "--out", c.to_str().unwrap()], &cfg).status.code(), Some(0));
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn verify_below_the_noise_floor_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c2.json", r#"{"group": "C2-sc", "s": ["1/2", "1/2"], "samples": 50}"#);
    let o = dsendo(&["verify"], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dsendo(&["verify", "--tol", "1e-20"], &cfg);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL") && stdout(&o).contains("residual"));
}

#[test]
fn unsupported_configurations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g2.json", r#"{"group": "G2"}"#);
    let o = dsendo(&["oracle"], &cfg);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no oracle model"));
    let cfg = write_config(dir.path(), "su2.json", r#"{"group": "A1-sc", "s": ["1/2"], "form": {"class": [1]}}"#);
    assert_eq!(dsendo(&["verify"], &cfg).status.code(), Some(3));
    assert_eq!(dsendo(&["packet"], &cfg).status.code(), Some(0));
}

#[test]
fn oracle_tables_match() {
    let dir = tempfile::tempdir().unwrap();
    for fam in ["A1-sc", "A1-adj"] {
        let cfg = write_config(dir.path(), "o.json", &format!(r#"{{"group": "{fam}"}}"#));
        let out = dir.path().join("o-out.json");
        let o = dsendo(&["oracle", "--out", out.to_str().unwrap()], &cfg);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert_eq!(report(&out)["all_match"], true);
    }
}

#[test]
fn endoscopy_lists_sides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c2.json", r#"{"group": "C2-sc", "s": ["1/2", "1/2"]}"#);
    let out = dir.path().join("e.json");
    assert_eq!(dsendo(&["endoscopy", "--out", out.to_str().unwrap()], &cfg).status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["selected"]["h_type"], "A1xA1");
    assert_eq!(r["types"].as_array().unwrap().len(), 4);
    assert!(r["torus_sides"].as_array().unwrap().is_empty());
}
