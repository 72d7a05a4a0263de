//! Runs the binary and compares stdout with files under `tests/golden`.
//! Set `MAGARI4_BLESS=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::Command;

use magari4::synthesis::{default_vars, synthesize_with, SynthesisOptions};
use magari4::FuncTable;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_magari4"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str, args: &[&str], code: i32) {
    let (got_code, stdout, stderr) = run(args);
    assert_eq!(got_code, code, "{name}: exit code; stderr: {stderr}");
    let path = golden_dir().join(format!("{name}.out"));
    if std::env::var_os("MAGARI4_BLESS").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(stdout, expected, "{name}: stdout differs from {}", path.display());
}

#[test]
fn eval_and_table() {
    golden("eval_imp", &["eval", "p -> p", "--env", "p=s"], 0);
    golden("eval_json", &["--json", "eval", "p & q", "--env", "p=r,q=s"], 0);
    golden("table_delta", &["table", "#p"], 0);
    golden("table_vars_json", &["--json", "table", "p -> q", "--vars", "q,p"], 0);
}

#[test]
fn equivalence() {
    golden("equiv_same", &["equiv", "[]p", "p & #p"], 0);
    golden("equiv_differs", &["equiv", "p", "q"], 1);
    golden("equiv_differs_json", &["--json", "equiv", "~~p", "#p"], 1);
}

#[test]
fn relations() {
    golden("classify_delta", &["classify", "1:ss11"], 0);
    golden("classify_formula_json", &["--json", "classify", "p & q"], 0);
    golden("violations_r1", &["violations", "#p", "--relation", "R1"], 1);
    golden("violations_preserved", &["violations", "p", "--relation", "R12"], 0);
    golden("violations_matrix_json", &["--json", "violations", "~p", "--relation", "0s;0s"], 1);
    golden("violations_all", &["violations", "p | q"], 1);
}

#[test]
fn synthesis() {
    golden("synthesize_not", &["synthesize", "--table", "1:1sr0"], 0);
    golden("synthesize_simplified", &["synthesize", "--table", "1:0r1s", "--simplify"], 0);
    golden("synthesize_rejected", &["synthesize", "--table", "1:0s00"], 1);
    golden("synthesize_and_json", &["--json", "synthesize", "--table", "2:00000r0r00ss0rs1", "--simplify"], 0);
}

#[test]
fn systems() {
    golden("closure_connectives", &["--json", "closure", "--sigma", "connectives.sigma"], 0);
    golden("closure_not_delta", &["closure", "--sigma", "not_delta.sigma", "--arity", "2"], 0);
    golden("derive_canned", &["derive-constants", "--sigma", "canned.sigma"], 0);
    golden("derive_canned_json", &["--json", "derive-constants", "--sigma", "canned.sigma"], 0);
    golden("derive_missing", &["derive-constants", "--sigma", "missing_f7.sigma"], 1);
    golden("selftest", &["selftest"], 0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["eval", "p &"],
        &["eval", "p", "--env", "p=x"],
        &["eval", "p & q", "--env", "p=0"],
        &["synthesize", "--table", "0:1"],
        &["synthesize", "--table", "5:0"],
        &["violations", "p", "--relation", "R13"],
        &["closure", "--sigma", "missing.sigma"],
        &["closure", "--sigma", "connectives.sigma", "--arity", "2"],
    ] {
        let (code, _, stderr) = run(args);
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(!stderr.is_empty());
    }
}

#[test]
fn json_tables_round_trip() {
    let (_, stdout, _) = run(&["--json", "table", "~#p | q"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let table = format!("{}:{}", v["arity"], v["entries"].as_str().unwrap());
    let (code, stdout, _) = run(&["--json", "classify", &table]);
    assert_eq!(code, 0);
    let back: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(back["table"]["entries"], v["entries"]);
}

#[test]
fn synthesize_matches_library() {
    let table = "2:0r00rr0000ss00s1";
    let (_, stdout, _) = run(&["synthesize", "--table", table]);
    let t: FuncTable = table.parse().unwrap();
    let lib = synthesize_with(&t, &default_vars(2), SynthesisOptions::default()).unwrap();
    assert_eq!(stdout.trim_end(), lib.to_string());
}

#[test]
fn derivation_json_schema() {
    let (_, stdout, _) = run(&["--json", "derive-constants", "--sigma", "canned.sigma"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let items = v.as_array().unwrap();
    let constants: Vec<&str> = items.iter().map(|d| d["constant"].as_str().unwrap()).collect();
    assert_eq!(constants, ["0", "r", "s", "1"]);
    for d in items {
        assert!(d["term"].is_string());
        assert!(d["trace"].as_array().is_some_and(|t| !t.is_empty()));
        let c = d["constant"].as_str().unwrap();
        assert_eq!(d["table"]["entries"], c.repeat(4));
        let formula = d["formula"].as_str().unwrap();
        let (_, value, _) = run(&["eval", formula, "--env", "p=s"]);
        assert_eq!(value.trim(), c);
    }
}
