use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;

use cylcert::cli::{main_with_args, EXIT_CAPACITY, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Runs the command with `--output`, returning the exit code and the parsed report.
    fn run(&self, args: &[&str]) -> (i32, Value) {
        let out = self.path("report.json");
        let _ = std::fs::remove_file(&out);
        let mut argv = vec!["cylcert".to_string(), "--output".into(), out.display().to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let code = main_with_args(argv);
        let report = std::fs::read_to_string(&out).map(|t| serde_json::from_str(&t).unwrap()).unwrap_or(Value::Null);
        (code, report)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SPEC_A: &str = r#"{"m": 1, "n": [4, 3], "q": 2, "r": 3, "p": ["1", "1"]}"#;
const SPEC_B: &str = r#"{"m": 1, "n": [4, 3], "q": 2, "r": 3, "p": ["2", "6"]}"#;

#[test]
fn build_and_validation() {
    let ws = Workspace::new();
    let good = ws.file("good.json", SPEC_A);
    let (code, rep) = ws.run(&["build", s(&good)]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let qr = ws.file("qr.json", r#"{"m": 0, "n": [2], "q": 2, "r": 2, "p": ["1"]}"#);
    let (code, rep) = ws.run(&["build", s(&qr)]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(rep["verdict"], "error");
    assert!(rep["details"]["error"].as_str().unwrap().contains("gcd(q, r) = 1"));

    let junk = ws.file("junk.json", "{ not json");
    assert_eq!(ws.run(&["build", s(&junk)]).0, EXIT_INPUT);
    assert_eq!(ws.run(&["build", s(&ws.path("missing.json"))]).0, EXIT_INPUT);
    let extra = ws.file("extra.json", r#"{"m": 0, "n": [2], "q": 2, "r": 3, "p": ["1"], "colour": 1}"#);
    assert_eq!(ws.run(&["build", s(&extra)]).0, EXIT_INPUT);
}

#[test]
fn smoothness_exit_codes() {
    let ws = Workspace::new();
    let good = ws.file("good.json", SPEC_A);
    assert_eq!(ws.run(&["smooth", s(&good)]).0, EXIT_PASS);

    let singular = ws.file("sing.json", r#"{"m": 0, "n": [2], "q": 2, "r": 3, "p": ["0", "1"]}"#);
    let (code, rep) = ws.run(&["smooth", s(&singular)]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(rep["result"]["evidence"]["singular_point"]["x0"], "0/1");

    let one = ws.file("one.json", r#"{"m": 0, "n": [2], "q": 2, "r": 3, "p": ["1"]}"#);
    assert_eq!(ws.run(&["--pair-cap", "1", "smooth", s(&one)]).0, EXIT_CAPACITY);
}

#[test]
fn cylinder_round_trip_and_tampering() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", r#"{"m": 1, "n": [2, 3], "q": 2, "r": 3, "p": ["2", "1"]}"#);
    let cert = ws.path("cert.json");
    assert_eq!(ws.run(&["cylinder", s(&spec), "--emit", s(&cert)]).0, EXIT_PASS);
    assert_eq!(ws.run(&["cylinder", s(&spec), "--verify", s(&cert)]).0, EXIT_PASS);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["rescaling"]["mu0"], "1/2");
    doc["g1"][1] = Value::String("1/5".into());
    let tampered = ws.file("tampered.json", &doc.to_string());
    let (code, rep) = ws.run(&["cylinder", s(&spec), "--verify", s(&tampered)]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(rep["verdict"], "fail");

    let zero = ws.file("zero.json", r#"{"m": 0, "n": [2], "q": 2, "r": 3, "p": ["0", "1"]}"#);
    assert_eq!(ws.run(&["cylinder", s(&zero), "--emit", s(&ws.path("z.json"))]).0, EXIT_INPUT);
    assert_eq!(ws.run(&["cylinder", s(&spec)]).0, EXIT_INPUT);
}

#[test]
fn family_exit_codes() {
    let ws = Workspace::new();
    let base = ["family", "--n", "4", "--m", "0", "--q", "2", "--r", "3"];
    let (code, rep) = ws.run(&base);
    assert_eq!(code, EXIT_PASS);
    let res = rep["result"]["resultant"].as_str().unwrap().to_string();
    assert!(res.contains("a2^5"));

    let with = |extra: &str| {
        let mut a = base.to_vec();
        a.extend(["--specialize", extra]);
        ws.run(&a)
    };
    let (code, rep) = with("0");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rep["result"]["spec"]["p"], serde_json::json!(["1/1", "1/1"]));
    assert_eq!(with("a2=-7/3").0, EXIT_PASS);

    let root = format!("a2=root({res})");
    let (code, rep) = with(&root);
    assert_eq!(code, EXIT_FAIL);
    assert!(rep["details"]["vanishing_locus"].is_object());
    assert_eq!(with("root(a2^2 - 2)").0, EXIT_INPUT);
    assert_eq!(with("a3=1").0, EXIT_INPUT);
    assert_eq!(ws.run(&["family", "--n", "3", "--m", "0", "--q", "2", "--r", "3"]).0, EXIT_INPUT);
}

#[test]
fn classify_exit_codes() {
    let ws = Workspace::new();
    let a = ws.file("a.json", SPEC_A);
    let b = ws.file("b.json", SPEC_B);
    let (code, rep) = ws.run(&["classify", s(&a), s(&b)]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rep["result"]["equivalent"], true);
    assert_eq!(rep["result"]["mu"], "2/1");
    assert_eq!(rep["result"]["lambda"], "3/1");

    let c = ws.file("c.json", r#"{"m": 1, "n": [4, 3], "q": 2, "r": 3, "p": ["1", "0", "1"]}"#);
    let (code, rep) = ws.run(&["classify", s(&a), s(&c)]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rep["result"]["equivalent"], false);

    let cubic = ws.file("d.json", r#"{"m": 1, "n": [4, 3], "q": 2, "r": 3, "p": ["1", "0", "0", "1"]}"#);
    assert_eq!(ws.run(&["classify", s(&a), s(&cubic)]).0, EXIT_INPUT);
}

#[test]
fn lnd_exit_codes() {
    let ws = Workspace::new();
    let spec = ws.file("spec.json", r#"{"m": 0, "n": [2], "q": 2, "r": 3, "p": ["1", "1"]}"#);
    let dz = ws.file("dz.json", r#"{"images": {"z": "x0^2", "y": "-2*z"}}"#);
    let (code, rep) = ws.run(&["lnd", s(&spec), s(&dz)]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(rep["result"]["nilpotency"]["degrees"]["y"], 2);

    let eigen = ws.file("eigen.json", r#"{"images": {"z": "z"}}"#);
    assert_eq!(ws.run(&["lnd", s(&spec), s(&eigen)]).0, EXIT_FAIL);
    assert_eq!(ws.run(&["--nilpotency-cap", "0", "lnd", s(&spec), s(&dz)]).0, EXIT_CAPACITY);
    let unknown = ws.file("bad.json", r#"{"images": {"v": "z"}}"#);
    assert_eq!(ws.run(&["lnd", s(&spec), s(&unknown)]).0, EXIT_INPUT);
}

#[test]
fn reports_are_reproducible() {
    let ws = Workspace::new();
    let a = ws.file("a.json", SPEC_A);
    let read = || std::fs::read(ws.path("report.json")).unwrap();
    for args in [vec!["smooth", s(&a)], vec!["corpus", "--count", "5"]] {
        ws.run(&args);
        let first = read();
        ws.run(&args);
        assert_eq!(first, read(), "{args:?}");
    }
    ws.run(&["--seed", "1", "corpus", "--count", "5"]);
    let one = read();
    ws.run(&["--seed", "2", "corpus", "--count", "5"]);
    assert_ne!(one, read());
}
