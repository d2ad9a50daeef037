use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_renyisim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("RENYI_GUARD_ATOMS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Files {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        std::fs::write(root.join("p.json"), r#"{"labels": ["0", "1"], "probs": [0.7, 0.3]}"#).unwrap();
        std::fs::write(root.join("q.json"), "[0.9, 0.1]").unwrap();
        Files { _dir: dir, root }
    }
    fn path(&self, name: &str) -> String {
        self.root.join(name).to_string_lossy().into_owned()
    }
}

fn value(o: &Output) -> f64 {
    let s = stdout(o);
    let t = s.trim();
    if t == "inf" {
        f64::INFINITY
    } else {
        t.parse().unwrap_or_else(|_| panic!("not a number: {t:?}"))
    }
}

#[test]
fn rate_example() {
    let f = Files::new();
    let o = run(&["rate", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "0.5", "--dir", "pq"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1.879103");
}

#[test]
fn resolvability_max_uses_negative_order() {
    let f = Files::new();
    let o = run(&["resolvability", "--q", &f.path("q.json"), "--alpha", "inf", "--dir", "max"]);
    assert!(o.status.success());
    assert!((value(&o) - 10f64.ln()).abs() < 1e-6);
    let o = run(&["resolvability", "--q", &f.path("q.json"), "--alpha", "1", "--dir", "max"]);
    assert!((value(&o) - 2f64.ln()).abs() < 1e-6);
}

#[test]
fn bits_only_rescale_nat_outputs() {
    let f = Files::new();
    let nats = value(&run(&["entropy", "--p", &f.path("p.json"), "--alpha", "1"]));
    let bits = value(&run(&["--units", "bits", "entropy", "--p", &f.path("p.json"), "--alpha", "1"]));
    assert!((bits - nats / std::f64::consts::LN_2).abs() < 1e-6);
    let args = ["rate", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2"];
    let r1 = stdout(&run(&args));
    let mut with_bits = vec!["--units", "bits"];
    with_bits.extend_from_slice(&args);
    assert_eq!(r1, stdout(&run(&with_bits)));
}

#[test]
fn negative_order_entropy_and_divergence_directions() {
    let f = Files::new();
    let o = run(&["entropy", "--p", &f.path("p.json"), "--alpha", "-inf"]);
    assert!((value(&o) + 0.3f64.ln()).abs() < 1e-6);
    let pq = value(&run(&["divergence", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2", "--dir", "pq"]));
    let qp = value(&run(&["divergence", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2", "--dir", "qp"]));
    let sum = value(&run(&["divergence", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2", "--dir", "sum"]));
    let max = value(&run(&["divergence", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2", "--dir", "max"]));
    assert!((sum - pq - qp).abs() < 2e-6);
    assert!((max - pq.max(qp)).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let f = Files::new();
    let bad_alpha = run(&["entropy", "--p", &f.path("p.json"), "--alpha", "abc"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    std::fs::write(f.root.join("bad.json"), "{\"probs\": [0.5,").unwrap();
    assert_eq!(run(&["entropy", "--p", &f.path("bad.json"), "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["entropy", "--p", &f.path("missing.json"), "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // p = (0.7, 0.3), q = (0.9, 0.1): H0 ratio 1 sits exactly on the threshold
    let knife = run(&["asym", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--rate", "1", "--alpha", "2", "--dir", "qp"]);
    assert_eq!(knife.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&knife.stderr).contains("boundary"));
    let guarded = bin()
        .args(["construct", "--kind", "greedy", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--k", "8", "--n", "8"])
        .env("RENYI_GUARD_ATOMS", "100")
        .output()
        .unwrap();
    assert_eq!(guarded.status.code(), Some(3));
    let env_bad = bin().args(["entropy", "--p", &f.path("p.json"), "--alpha", "1"]).env("RENYI_GUARD_ATOMS", "x").output().unwrap();
    assert_eq!(env_bad.status.code(), Some(2));
}

#[test]
fn construct_then_evaluate() {
    let f = Files::new();
    let code = f.path("code.json");
    let o = run(&["construct", "--kind", "inverse-transform", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--k", "6", "--n", "4", "--out", &code]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(&code).exists());
    let d = value(&run(&["evaluate", "--code", &code, "--alpha", "inf", "--dir", "pq"]));
    assert!(d.is_finite() && d >= 0.0);
    let o = run(&["construct", "--kind", "m-type-quantizer", "--q", &f.path("q.json"), "--n", "3", "--m", "8", "--variant", "qp"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "m-type-quantizer");
    let o = run(&["construct", "--kind", "partition", "--q", &f.path("q.json"), "--n", "3", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_guessing_compare_and_oracle() {
    let f = Files::new();
    let e = value(&run(&["spectrum", "--p", &f.path("p.json"), "--j", "0.5", "--side", "lower"]));
    assert!(e > 0.0 && e.is_finite());
    let edge = run(&["spectrum", "--p", &f.path("p.json"), "--j", &(-(0.7f64.ln())).to_string(), "--side", "lower"]);
    assert!(String::from_utf8_lossy(&edge.stderr).contains("endpoint"));
    let inv = value(&run(&["spectrum", "--p", &f.path("p.json"), "--omega", "0.2", "--side", "upper"]));
    assert!(inv > 0.6 && inv <= -(0.3f64.ln()) + 1e-9);
    let g = stdout(&run(&["guessing", "--p", &f.path("p.json"), "--key", &f.path("q.json"), "--rho", "1"]));
    assert!(g.starts_with("lower ") && g.contains("\nupper "));
    let e = value(&run(&["guessing", "--p", &f.path("p.json"), "--rho", "1", "--rate", "10"]));
    let h_half = 2.0 * (0.7f64.sqrt() + 0.3f64.sqrt()).ln();
    assert!((e - h_half).abs() < 1e-6);
    let c: serde_json::Value = serde_json::from_slice(&run(&["compare-exponents", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--rate", "0.5"]).stdout).unwrap();
    assert_eq!(c["dominates"], c["predicted"]);
    let o = run(&["oracle", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2", "--dir", "pq", "--rate", "0.8", "--k", "2", "--n", "2"]);
    assert!(o.status.success());
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
    }
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let f = Files::new();
    let args = |out: &str| {
        vec![
            "sweep".to_string(), "rate".into(), "--p".into(), f.path("p.json"), "--q".into(), f.path("q.json"),
            "--alpha".into(), "0:0.05:5,inf".into(), "--dir".into(), "pq".into(), "--out".into(), f.path(out),
        ]
    };
    for (threads, out) in [("1", "a.csv"), ("4", "b.csv")] {
        let o = bin().args(args(out)).env("RAYON_NUM_THREADS", threads).output().unwrap();
        assert!(o.status.success());
    }
    let a = std::fs::read(f.root.join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(f.root.join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "alpha,rate");
    assert_eq!(rows.len(), 1 + 101 + 1);
    let rate_at = |tok: &str| rows.iter().find(|r| r.starts_with(&format!("{tok},"))).unwrap().split(',').nth(1).unwrap().parse::<f64>().unwrap();
    // for this pair the infimum sits at t -> 0, so every positive order gives H/H
    for tok in ["0.25", "0.75", "2.00", "5.00", "inf"] {
        assert!((rate_at(tok) - 1.879103).abs() < 1e-6, "{tok}");
    }
    assert!((rate_at("0.00") - 2f64.ln() / 0.325082973391448).abs() < 1e-6);
}

#[test]
fn sweep_json_and_argument_rules() {
    let f = Files::new();
    let o = run(&["sweep", "resolvability", "--q", &f.path("q.json"), "--alpha", "2", "--dir", "max", "--rate", "0.1:0.2:0.9", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert!(v[0].get("rate").is_some() && v[0].get("divergence").is_some());
    let two = run(&["sweep", "asym", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--rate", "0.1,0.2", "--alpha", "1,2"]);
    assert_eq!(two.status.code(), Some(2));
    let none = run(&["sweep", "rate", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "2"]);
    assert_eq!(none.status.code(), Some(2));
    let grid_outside = run(&["rate", "--p", &f.path("p.json"), "--q", &f.path("q.json"), "--alpha", "1,2"]);
    assert_eq!(grid_outside.status.code(), Some(2));
}
