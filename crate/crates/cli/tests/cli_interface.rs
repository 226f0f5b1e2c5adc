//! Binary-level contract tests: exit codes, schema line, output routing,
//! and the worker-cap environment variable.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_duality-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn check_exits_zero_with_schema_line() {
    let out = run(&[
        "check",
        "--relation",
        "cor1",
        "--n",
        "2",
        "--trials",
        "25",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let first = stdout.lines().next().unwrap();
    assert!(first.starts_with("# duality-lab v"), "got {first}");
    assert!(first.ends_with("schema=1"));
    assert!(stdout
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("relation,trial,"));
    // summary goes to stderr when the table uses stdout
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("violations=0"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["check", "--relation", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--relation", "th3", "--n", "4", "--trials", "5"])
            .status
            .code(),
        Some(2),
        "th3 beyond 2x2 needs --pure"
    );
    assert_eq!(
        run(&["check", "--relation", "cor1", "--n", "3", "--trials", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["example", "--name", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["report", "--input", "/no/such/file"]).status.code(),
        Some(2)
    );
    // clap-level parse failure
    assert_eq!(run(&["check", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn th3_pure_run_at_four_paths_succeeds() {
    let out = run(&[
        "check",
        "--relation",
        "th3",
        "--n",
        "4",
        "--pure",
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn repeated_seed_gives_byte_identical_stdout() {
    let args = [
        "check",
        "--relation",
        "th1",
        "--n",
        "2",
        "--trials",
        "1",
        "--seed",
        "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn thread_cap_does_not_change_output() {
    let make = |threads: &str| {
        bin()
            .env("DUALITY_LAB_THREADS", threads)
            .args([
                "check",
                "--relation",
                "th2",
                "--n",
                "3",
                "--trials",
                "64",
                "--seed",
                "5",
            ])
            .output()
            .expect("binary runs")
    };
    let one = make("1");
    let eight = make("8");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn report_round_trip_and_exit_codes() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let artifact = dir.join("report_in.csv");
    let out = bin()
        .args([
            "check",
            "--relation",
            "cor2",
            "--n",
            "2",
            "--trials",
            "40",
            "--seed",
            "2",
            "--output",
        ])
        .arg(&artifact)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));

    let report = bin()
        .args(["report", "--input"])
        .arg(&artifact)
        .output()
        .unwrap();
    assert_eq!(report.status.code(), Some(0));
    let text = String::from_utf8(report.stdout).unwrap();
    assert!(text.contains("relation=cor2"));
    assert!(text.contains("rows=40"));
    assert!(text.contains("violations=0"));

    // a fabricated artifact with a violation row exits 1
    let bad = dir.join("report_bad.csv");
    std::fs::write(
        &bad,
        "# duality-lab v0.1.0 schema=1\nrelation,residual,satisfied\nth1,-0.5,false\n",
    )
    .unwrap();
    let report = bin()
        .args(["report", "--input"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(report.status.code(), Some(1));
}

#[test]
fn json_format_is_valid_and_mirrors_rows() {
    let out = run(&[
        "check",
        "--relation",
        "cor1",
        "--n",
        "2",
        "--trials",
        "8",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert_eq!(doc["rows"][0]["relation"], "cor1");
    assert_eq!(doc["rows"][0]["satisfied"], true);
}

#[test]
fn example_and_sweep_run_via_binary() {
    let out = run(&["example", "--name", "threepath", "--steps", "6,6"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2 + 36);

    let out = run(&[
        "sweep", "--family", "werner", "--grid", "p=0:1:11", "--fix", "x=0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2 + 11);
    // unknown sweep parameter is a usage error
    let out = run(&["sweep", "--family", "werner", "--grid", "c_u=0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
}
