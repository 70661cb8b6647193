use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const THETA3: &str = "4:1/4:-1,0=1/2;1,1=2/3;1,-1=1/3;1,3=1/3";
const CHI_TRIVIAL: &str = "1:0:";

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-period"))
        .env("TORIC_PERIOD_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compute_is_deterministic_and_certified() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--p", "3", "compute", "--d", "-3", "--theta", THETA3, "--chi", THETA3, "--vector",
        "1,1;0,2",
    ];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["value"]["order"], 1);
    assert_eq!(v["value"]["coeffs"][0], "2");
    assert_eq!(v["certificate"]["m_plus_one_equal"], true);
}

#[test]
fn cached_tables_give_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let direct = run(
        dir.path(),
        &[
            "--p",
            "3",
            "compute",
            "--d",
            "-3",
            "--theta",
            THETA3,
            "--chi",
            THETA3,
            "--newform",
        ],
    );
    assert_eq!(direct.status.code(), Some(0));

    let stored = run(
        dir.path(),
        &[
            "--p", "3", "cache", "store", "th", "--d", "-3", "--char", THETA3,
        ],
    );
    assert_eq!(
        stored.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&stored.stderr)
    );
    let listed = json(&run(dir.path(), &["cache", "list"]));
    assert_eq!(listed["tables"], serde_json::json!(["th"]));

    let cached = run(
        dir.path(),
        &[
            "--p",
            "3",
            "compute",
            "--d",
            "-3",
            "--theta",
            "@th",
            "--chi",
            "@th",
            "--newform",
        ],
    );
    assert_eq!(
        cached.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&cached.stderr)
    );
    let (a, b) = (json(&direct), json(&cached));
    assert_eq!(a["value"], b["value"]);
    assert_eq!(a["certificate"], b["certificate"]);
    assert_eq!(a["inputs"]["theta"], b["inputs"]["theta"]);

    let again = run(
        dir.path(),
        &[
            "--p",
            "3",
            "compute",
            "--d",
            "-3",
            "--theta",
            "@th",
            "--chi",
            "@th",
            "--newform",
        ],
    );
    assert_eq!(cached.stdout, again.stdout);

    assert_eq!(run(dir.path(), &["cache", "clear"]).status.code(), Some(0));
    let missing = run(
        dir.path(),
        &[
            "--p", "3", "compute", "--d", "-3", "--theta", "@th", "--chi", "@th",
        ],
    );
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn exit_codes_separate_configuration_and_budget_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_prime = run(
        dir.path(),
        &[
            "--p", "4", "compute", "--d", "-3", "--theta", THETA3, "--chi", THETA3,
        ],
    );
    assert_eq!(bad_prime.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_prime.stderr).contains("odd prime"));

    let incompatible = run(
        dir.path(),
        &[
            "--p",
            "3",
            "compute",
            "--d",
            "-3",
            "--theta",
            THETA3,
            "--chi",
            CHI_TRIVIAL,
        ],
    );
    assert_eq!(incompatible.status.code(), Some(1));

    let usage = run(dir.path(), &["compute"]);
    assert_eq!(usage.status.code(), Some(1));

    let capped = run(
        dir.path(),
        &[
            "--p",
            "3",
            "--cyclo-cap",
            "2",
            "compute",
            "--d",
            "-3",
            "--theta",
            THETA3,
            "--chi",
            THETA3,
            "--newform",
        ],
    );
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds cap"));
}

#[test]
fn verify_sylvester_reports_every_prime() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "sylvester"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["ok"], true);
    let betas: Vec<(u64, String)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["kind"] == "beta")
        .map(|e| {
            (
                e["label"]["p"].as_u64().unwrap(),
                e["value"]["coeffs"][0].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(
        betas,
        vec![
            (7, "1".into()),
            (13, "1/2".into()),
            (31, "1/2".into()),
            (43, "1".into())
        ]
    );

    let table = run(
        dir.path(),
        &["--format", "table", "--p", "7", "verify", "sylvester"],
    );
    assert_eq!(table.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&table.stdout).contains("passed, 0 failed"));
}

#[test]
fn verify_diagonal_at_three_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--p", "3", "verify", "sec24-diagonal"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 480);
}
