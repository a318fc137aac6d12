//! End-to-end tests of the binary: exit codes, machine-readable error
//! names on stderr, output formats, config-file semantics, and the
//! fault-injection path of the verify subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn boxcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxcong"))
        .args(args)
        .env_remove("BOXCONG_MEMORY_CAP")
        .output()
        .expect("binary runs")
}

fn boxcong_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxcong"))
        .args(args)
        .current_dir(dir)
        .env_remove("BOXCONG_MEMORY_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn count_agrees_and_echoes_config() {
    let out = boxcong(&[
        "count", "--p", "7", "--n", "3", "--s", "1", "--a", "1", "--b", "3", "--k", "3", "--h",
        "6", "--method", "both",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("count (brute force) = 9"));
    assert!(text.contains("count (spectral) = 9"));
    assert!(text.contains("main term (density, h^n/p^(s+1))"));
    assert!(text.contains("main term (separated, h^n/((p-1)p^s))"));
    assert!(text.contains("residual"));
    assert!(text.contains("elapsed:"));
    assert!(text.contains("boxcong 0.1.0 count"));
    assert!(text.contains("p = 7"));
    assert!(text.contains("method = both"));
    assert!(text.contains("seed = 1"));
}

#[test]
fn count_rejects_bad_input_with_exit_2() {
    let out = boxcong(&["count", "--p", "15", "--n", "2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error: NotPrime"));

    let out = boxcong(&["count", "--n", "2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error: ConfigError"));

    let out = boxcong(&["count", "--p", "7", "--n", "2", "--b", "3"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("--b given but s = 0"));

    let out = boxcong(&["count", "--p", "7", "--n", "2", "--s", "1"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("needs --k"));
}

#[test]
fn count_resource_guards_exit_3() {
    let out = boxcong(&[
        "count", "--p", "101", "--n", "8", "--s", "1", "--k", "5", "--h", "80", "--method",
        "brute",
    ]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("error: SizeGuard"));

    let out = Command::new(env!("CARGO_BIN_EXE_boxcong"))
        .args(["count", "--p", "1009", "--n", "2", "--h", "5"])
        .env("BOXCONG_MEMORY_CAP", "64")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("error: TooLarge"));

    let out = Command::new(env!("CARGO_BIN_EXE_boxcong"))
        .args(["count", "--p", "1009", "--n", "2", "--h", "5"])
        .env("BOXCONG_MEMORY_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("BOXCONG_MEMORY_CAP"));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "p = 7\nn = 3\ns = 1\nb = 3\nk = 3\nh = 6\nmethod = spectral\n",
    )
    .unwrap();

    let out = boxcong_in(dir.path(), &["count", "--config", "run.cfg"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("count (spectral) = 9"));

    // A flag overrides the file entry for the same key.
    let out = boxcong_in(dir.path(), &["count", "--config", "run.cfg", "--h", "4"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("h = 4"));

    std::fs::write(dir.path().join("bad.cfg"), "p = 7\nn = 2\nturbo = on\n").unwrap();
    let out = boxcong_in(dir.path(), &["count", "--config", "bad.cfg"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown config keys"));
    assert!(stderr(&out).contains("turbo"));
}

#[test]
fn verify_passes_clean_and_fails_under_fault() {
    let out = boxcong(&["verify", "--battery", "3", "--p", "7,13", "--seed", "5"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"));
    assert!(text.contains("PASS add-orthogonality"));
    assert!(text.contains("PASS count-oracle-equivalence"));

    let out = boxcong(&[
        "verify", "--battery", "3", "--p", "7,13", "--seed", "5", "--fault", "dlog",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("FAIL mult-orthogonality"));
    assert!(stderr(&out).contains("error: VerificationFailed"));

    let out = boxcong(&["verify", "--battery", "0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error: EmptyBattery"));

    let out = boxcong(&["verify", "--fault", "gremlin"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown fault"));
}

#[test]
fn verify_is_seed_deterministic() {
    // CSV keeps timing on stderr, so the bytes must reproduce exactly.
    let args = [
        "verify", "--battery", "4", "--p", "7,13", "--seed", "11", "--format", "csv",
    ];
    let first = boxcong(&args);
    let second = boxcong(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("add-orthogonality,1,"));
}

#[test]
fn sweep_emits_csv_with_schema_and_rows() {
    let out = boxcong(&[
        "sweep", "--target", "acz", "--grid", "101:11", "--instances", "4", "--seed", "9",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# boxcong 0.1.0"));
    assert!(text.contains("# command = sweep"));
    assert!(text.contains("target,p,h,n,s,seed,exact,bound,ratio,flagged,count,excess"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("acz,101,11,"))
        .collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row.split(',').count(), 12);
        assert!(row.split(',').nth(9).unwrap() == "0" || row.split(',').nth(9).unwrap() == "1");
    }
    assert!(text.contains("# max_ratio = "));
}

#[test]
fn sweep_rejects_unknown_target_and_bad_grid() {
    let out = boxcong(&["sweep", "--target", "unknown", "--grid", "7:3"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown target"));

    let out = boxcong(&["sweep", "--target", "acz", "--grid", "101:0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error: ConfigError"));

    let out = boxcong(&["sweep", "--target", "acz"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("needs --grid"));
}

#[test]
fn sweep_from_config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sweep.cfg"),
        "target = wooley\ngrid = 101:20,1009:50\ninstances = 5\nseed = 21\n",
    )
    .unwrap();
    let from_file = boxcong_in(dir.path(), &["sweep", "--config", "sweep.cfg"]);
    let from_flags = boxcong(&[
        "sweep", "--target", "wooley", "--grid", "101:20,1009:50", "--instances", "5", "--seed",
        "21",
    ]);
    assert_eq!(exit_code(&from_file), 0, "stderr: {}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn sweep_json_round_trips() {
    let out = boxcong(&[
        "sweep", "--target", "weil", "--grid", "101:100", "--instances", "3", "--format", "json",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["tool"], "boxcong");
    assert_eq!(doc["command"], "sweep");
    assert_eq!(doc["report"]["rows"].as_array().unwrap().len(), 3);
    assert!(doc["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn moments_reproduces_known_identity() {
    let out = boxcong(&["moments", "--p", "5", "--h", "4", "--format", "csv"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.starts_with("5,0,4,ones,"))
        .expect("data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[4].parse::<f64>().unwrap(), 256.0);
    assert_eq!(fields[6], "64");
    assert_eq!(fields[7].parse::<f64>().unwrap(), 4.0);

    let out = boxcong(&["moments", "--p", "13", "--h", "9", "--weights", "random"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("identity within 1e-6: yes"));
}

#[test]
fn moments_rejects_oversized_interval() {
    let out = boxcong(&["moments", "--p", "13", "--h", "13"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error: IntervalOutOfRange"));

    let out = boxcong(&["moments", "--p", "13", "--h", "9", "--weights", "banana"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unknown weights mode"));
}

#[test]
fn reports_write_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = boxcong(&[
        "sweep",
        "--target",
        "chang",
        "--grid",
        "1009:40",
        "--instances",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("target,p,h,n,s,seed,exact,bound,ratio,flagged,t,degree"));
}
