use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const IDENTITY: &str = r#"[[[1,0,0,0],[0,0,0,0],[0,0,0,0]],
 [[0,0,0,0],[1,0,0,0],[0,0,0,0]],
 [[0,0,0,0],[0,0,0,0],[1,0,0,0]]]"#;

/// `[[2, 0, i], [0, 1, 0], [−i, 0, 1]]`.
const LINE_ELEMENT: &str = r#"[[[2,0,0,0],[0,0,0,0],[0,1,0,0]],
 [[0,0,0,0],[1,0,0,0],[0,0,0,0]],
 [[0,-1,0,0],[0,0,0,0],[1,0,0,0]]]"#;

const LINE_PAIR: &str = r#"{"generators": [
  [[[2,0,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0],["1/2",0,0,0]]],
  [[[2,0,0,0],[0,0,0,0],[0,1,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],[[0,-1,0,0],[0,0,0,0],[1,0,0,0]]]
], "labels": ["A", "B"]}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn failing_checks(&self) -> Vec<String> {
        self.json()["checks"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["pass"] == Value::Bool(false))
            .map(|c| c["name"].as_str().unwrap().to_owned())
            .collect()
    }

    fn check(&self, name: &str) -> Value {
        self.json()["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap_or_else(|| panic!("no check {name:?} in {}", self.stdout))
            .clone()
    }
}

fn qfuchs<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_qfuchs")).args(args).output().unwrap();
    Run {
        code: status.code().expect("exited"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn gen(dir: &TempDir, kind: &str, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{seed}.json"));
    let seed = seed.to_string();
    let run = qfuchs(["gen", "--kind", kind, "--seed", &seed, "--out", arg(&path)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_identity() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "id.json", IDENTITY);
    let run = qfuchs(["validate", arg(&file)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.failing_checks().is_empty());
    assert_eq!(run.check("matrix 0: membership residual")["value"], "0/1");
    assert_eq!(run.json()["checks"].as_array().unwrap().len(), 1 + 18 + 2);
}

#[test]
fn validate_line_element_is_exact() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "b.json", LINE_ELEMENT);
    let run = qfuchs(["validate", arg(&file)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(
        run.check("matrix 0: trace")["value"],
        serde_json::json!(["4/1", "0/1", "0/1", "0/1"])
    );
    assert!(run.json()["command"].as_str().unwrap().ends_with("--backend exact"));
}

#[test]
fn validate_names_broken_identities() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "p.json",
        &LINE_ELEMENT.replacen("[2,0,0,0]", r#"["21/10",0,0,0]"#, 1),
    );
    let run = qfuchs(["validate", arg(&file)]);
    assert_eq!(run.code, 2);
    let failing = run.failing_checks();
    assert!(
        failing.contains(&"matrix 0: membership residual".to_owned()),
        "{failing:?}"
    );
    assert!(
        failing.iter().any(|n| n.contains("identity a·l̄ + b·h̄ + c·ḡ = 1")),
        "{failing:?}"
    );
}

#[test]
fn validate_float_backend_uses_tolerance() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "id.json",
        &IDENTITY.replacen("[1,0,0,0]", "[1.0000000000001,0,0,0]", 1),
    );
    assert_eq!(qfuchs(["validate", arg(&file)]).code, 0);
    assert_eq!(qfuchs(["validate", "--tol", "1e-16", arg(&file)]).code, 2);
}

#[test]
fn cartan_classifies_line_and_circle() {
    let dir = TempDir::new().unwrap();
    let line = write(
        &dir,
        "line.json",
        r#"{"points": [[[0,0,0,0],[0,0,0,0],[1,0,0,0]], [[1,0,0,0],[0,0,0,0],[0,0,0,0]], [[0,1,0,0],[0,0,0,0],[1,0,0,0]]]}"#,
    );
    let run = qfuchs(["cartan", arg(&line)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.check("classification")["value"], "H-line");
    let angle = run.check("cartan angle")["value"].as_f64().unwrap();
    assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let circle = write(
        &dir,
        "circle.json",
        r#"[[[0,0,0,0],[0,0,0,0],[1,0,0,0]], [[1,0,0,0],[0,0,0,0],[0,0,0,0]], [[-1,0,0,0],[1.4142135623730951,0,0,0],[1,0,0,0]]]"#,
    );
    let run = qfuchs(["cartan", arg(&circle)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.check("classification")["value"], "R-circle");
}

#[test]
fn cartan_rejects_bad_triples() {
    let dir = TempDir::new().unwrap();
    let repeated = write(
        &dir,
        "rep.json",
        r#"[[[0,0,0,0],[0,0,0,0],[1,0,0,0]], [[0,0,0,0],[0,0,0,0],[1,0,0,0]], [[1,0,0,0],[0,0,0,0],[0,0,0,0]]]"#,
    );
    let run = qfuchs(["cartan", arg(&repeated)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.failing_checks(), ["nondegenerate"]);

    let positive = write(
        &dir,
        "pos.json",
        r#"[[[0,0,0,0],[1,0,0,0],[0,0,0,0]], [[0,0,0,0],[0,0,0,0],[1,0,0,0]], [[1,0,0,0],[0,0,0,0],[0,0,0,0]]]"#,
    );
    let run = qfuchs(["cartan", arg(&positive)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.failing_checks(), ["point 1 is null"]);
}

#[test]
fn detect_line_pair() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", LINE_PAIR);
    let run = qfuchs(["detect", arg(&file)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let verdict = &run.json()["verdict"];
    assert_eq!(verdict["kind"], "quaternionic_line");
    assert_eq!(verdict["diagnostics"]["middle_sign"], 1);
    assert!(run.failing_checks().is_empty());
}

#[test]
fn detect_generated_fixtures() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("so21-pair", 0, "real_fuchsian"),
        ("hline-pair", 0, "quaternionic_line"),
        ("generic-pair", 3, "not_real_trace"),
    ];
    for (kind, code, verdict) in cases {
        let file = gen(&dir, kind, 1);
        let run = qfuchs(["detect", arg(&file)]);
        assert_eq!(run.code, code, "{kind}: {}", run.stdout);
        assert_eq!(run.json()["verdict"]["kind"], verdict, "{kind}");
    }
    let generic = qfuchs(["detect", arg(&gen(&dir, "generic-pair", 1))]);
    let witness = generic.json()["verdict"]["witness_word"].as_str().unwrap().to_owned();
    assert!(witness.split_whitespace().count() <= 3, "{witness}");
}

#[test]
fn detect_single_generator_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "single-diagonal", 0);
    let run = qfuchs(["detect", arg(&file)]);
    assert_eq!(run.code, 4, "{}", run.stdout);
    assert_eq!(run.json()["verdict"]["kind"], "inconclusive");
}

#[test]
fn detect_text_output() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "pair.json", LINE_PAIR);
    let run = qfuchs(["detect", "--text", arg(&file)]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("verdict: quaternionic_line"), "{}", run.stdout);
    assert!(run
        .stdout
        .lines()
        .any(|l| l.starts_with("ok   line preservation over words")));
}

#[test]
fn gen_is_deterministic() {
    let a = qfuchs(["gen", "--kind", "so21-pair", "--seed", "7"]);
    let b = qfuchs(["gen", "--kind", "so21-pair", "--seed", "7"]);
    let c = qfuchs(["gen", "--kind", "so21-pair", "--seed", "8"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_line_pairs_are_exact() {
    let run = qfuchs(["gen", "--kind", "hline-pair", "--seed", "2"]);
    assert_eq!(run.code, 0);
    let first = &run.json()["generators"][0][0][0][0];
    assert!(first.is_string(), "{first}");
}

#[test]
fn normalize_sends_pair_to_infinity_and_origin() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "n.json",
        r#"{"p": [[0,0,0,0],[0,0,0,0],[1,0,0,0]], "q": [[1,0,0,0],[0,0,0,0],[0,0,0,0]],
            "generators": [[[[3,0,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0],[0.3333333333333333,0,0,0]]]]}"#,
    );
    let run = qfuchs(["normalize", arg(&file)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let out = &run.json()["output"];
    // swapping 0 and ∞ exchanges the diagonal corners
    let g = &out["generators"][0];
    assert!((g[0][0][0].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((g[2][2][0].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(qfuchs(["frobnicate"]).code, 1);
    assert_eq!(qfuchs(["gen", "--kind", "bogus"]).code, 1);
    assert_eq!(qfuchs(["gen", "--kind", "so21-pair", "--lambda-min", "0.5"]).code, 1);
    assert_eq!(qfuchs(["gen", "--kind", "single-diagonal", "--mu", "1,1,0,0"]).code, 1);
    assert_eq!(qfuchs(["--tol", "-1", "validate", "x.json"]).code, 1);
    assert_eq!(qfuchs(["--help"]).code, 0);

    let missing = qfuchs(["validate", "/nonexistent/file.json"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.starts_with("qfuchs: /nonexistent/file.json"));

    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"[[[1,0,0,0],[0,0,0,0],[0,0,0,0]], [[0,0,0,0],[1,0,"x",0],[0,0,0,0]], [[0,0,0,0],[0,0,0,0],[1,0,0,0]]]"#,
    );
    let run = qfuchs(["validate", arg(&bad)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("[1][1]"), "{}", run.stderr);
}
