use std::path::Path;
use std::process::{Command, Output};

use lresc_cli::bundle::{BundlePayload, CodeBundle};

fn lresc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lresc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const LRESC2: &str = r#"{"name": "lresc2", "code1": {"base": {"hadamard": {"k": 2}}, "concat": 2}}"#;

fn build(dir: &Path, recipe: &str) -> String {
    let r = write(dir, "recipe.json", recipe);
    let out = dir.join("out");
    let o = lresc(&["build", "--recipe", &r, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out.join("bundle.json").to_str().unwrap().to_owned()
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "recipe.json", LRESC2);
    let out = dir.path().join("out");
    let o = lresc(&["build", "--recipe", &r, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("N = 52, K = 4"), "{text}");
    assert!(text.contains("D (parents) = 4"), "{text}");
    assert!(text.contains("D <= 4"), "{text}");

    let bundle = out.join("bundle.json");
    let loaded = CodeBundle::load(&bundle).unwrap();
    assert!(loaded.intact().unwrap());
    let o = lresc(&["verify", "--bundle", bundle.to_str().unwrap(), "--distance", "3"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    for name in ["integrity", "orthogonality", "logicals", "tunneling", "distance-upper", "distance-lower"] {
        assert!(text.contains(&format!("PASS {name}")), "{name}: {text}");
    }
    assert!(!text.contains("FAIL"));

    // identical recipes give identical bundles
    let out2 = dir.path().join("out2");
    lresc(&["build", "--recipe", &r, "--out", out2.to_str().unwrap()]);
    assert_eq!(
        std::fs::read(&bundle).unwrap(),
        std::fs::read(out2.join("bundle.json")).unwrap()
    );
}

#[test]
fn corrupted_bundle_fails_integrity_and_orthogonality() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), LRESC2);
    let mut b = CodeBundle::load(Path::new(&path)).unwrap();
    let BundlePayload::Css(code) = &mut b.payload else { panic!("css bundle") };
    let q = (0..code.n()).find(|&q| !code.hz.column(q).is_zero()).unwrap();
    code.hx.flip(0, q);
    b.save(Path::new(&path)).unwrap();

    let o = lresc(&["verify", "--bundle", &path, "--checks", "orthogonality"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("FAIL integrity"), "{text}");
    assert!(text.contains("FAIL orthogonality"), "{text}");
}

#[test]
fn gadget_report_uses_one_based_cnots() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), LRESC2);
    let cases = [
        (r#"{"axis": "columns", "ops": [{"swap": [1, 2]}]}"#, "CNOT 1->2, CNOT 3->4"),
        (r#"{"axis": "columns", "ops": [{"swap": [0, 2]}]}"#, "CNOT 2->1, CNOT 4->3"),
    ];
    for (spec, expected) in cases {
        let g = write(dir.path(), "gadget.json", spec);
        let o = lresc(&["verify", "--bundle", &path, "--checks", "orthogonality", "--gadget", &g]);
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{text}");
        assert!(text.contains(&format!("PASS gadget: {expected}")), "{text}");
    }
    // logical index is 2·(row logical) + (column logical), so a permutation of
    // one factor permutes that digit only
    for (axis, expected) in [("rows", "[3 4 1 2]"), ("columns", "[2 1 4 3]")] {
        let spec = format!(r#"{{"axis": "{axis}", "ops": [{{"swap": [0, 1]}}]}}"#);
        let g = write(dir.path(), "gadget.json", &spec);
        let o = lresc(&["verify", "--bundle", &path, "--checks", "orthogonality", "--gadget", &g]);
        let text = stdout(&o);
        assert!(text.contains(&format!("PASS gadget: logical permutation {expected}")), "{text}");
    }
    // a non-orthogonal transform is rejected
    let g = write(dir.path(), "gadget.json", r#"{"axis": "columns", "ops": [{"add": {"src": 0, "dst": 1}}]}"#);
    let o = lresc(&["verify", "--bundle", &path, "--checks", "orthogonality", "--gadget", &g]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL gadget"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lresc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lresc(&["verify", "--bundle", "/nonexistent/bundle.json"]).status.code(), Some(2));

    let r = write(
        dir.path(),
        "bad.json",
        r#"{"code1": {"base": {"repetition": {"n": 3}}}, "min_distance": 5}"#,
    );
    let o = lresc(&["build", "--recipe", &r, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible distance request"));

    let path = build(dir.path(), r#"{"code1": {"base": {"hadamard": {"k": 2}}, "concat": 4}}"#);
    let o = lresc(&["verify", "--bundle", &path, "--checks", "distance", "--distance", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simulate_zero_noise_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), r#"{"name": "surface3", "code1": {"base": {"repetition": {"n": 3}}}}"#);
    let out = dir.path().join("sim");
    let args = [
        "simulate", "--bundle", &path, "--model", "phenomenological", "--decoder", "mwpm", "--trials", "50",
        "--cycles", "3", "--window", "1,2", "--p-grid", "0", "--seed", "9", "--out", out.to_str().unwrap(),
    ];
    let o = lresc(&args);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(text.contains("seed 9"), "{text}");
    assert!(text.contains("0 / 50 failed"), "{text}");
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3, "{csv}");
    assert!(out.join("report.json").exists());

    let o = lresc(&["simulate", "--bundle", &path, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "missing p grid");
    let o = lresc(&["simulate", "--bundle", &path, "--p-grid", "0.2,0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "decreasing p grid");
}
