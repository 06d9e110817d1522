use std::process::Command;

use pseudosim::experiment::{parse_json_lines, Suite};

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pseudosim"))
}

#[test]
fn passing_run_exits_zero_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let status = cli()
        .args(["--suite", "subsumption", "--trials", "1", "--format", "csv", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("suite,trial_index,seed,n,k,l,passed,"));
}

#[test]
fn json_lines_round_trip_through_cli() {
    let output = cli()
        .args(["--suite", "interlace-full-rank,mp-axioms", "--trials", "4", "--format", "json-lines"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let records = parse_json_lines(std::str::from_utf8(&output.stdout).unwrap()).unwrap();
    assert_eq!(records.len(), 8);
    assert_eq!(records[0].suite, Suite::InterlaceFullRank);
    assert_eq!(records[7].suite, Suite::MpAxioms);
    assert!(records.iter().all(|r| r.passed));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "suites = [\"solver-oracle\"]\ntrials = 9\n[output]\nformat = \"csv\"\n").unwrap();
    let output = cli().arg("--config").arg(&cfg).args(["--trials", "2"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(String::from_utf8(output.stdout).unwrap().lines().count(), 3);
}

#[test]
fn theorem_failure_exits_one() {
    // Structural zeros carry rounding-level imaginary parts, so a realness
    // threshold near zero rejects every inflated trial.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(&cfg, "suites = [\"interlace-inflated\"]\ntrials = 5\n[tolerances]\nrealness = 1e-300\n").unwrap();
    let output = cli().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["--suite", "nonsense"],
        vec!["--trials", "0"],
        vec!["--format", "xml"],
        vec!["--no-such-flag"],
    ] {
        let status = cli().args(&args).status().unwrap();
        assert_eq!(status.code(), Some(2), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "trials = \"many\"\n").unwrap();
    assert_eq!(cli().arg("--config").arg(&cfg).status().unwrap().code(), Some(2));
}

#[test]
fn unwritable_output_exits_three_before_running() {
    let output = cli()
        .args(["--trials", "1", "--out", "/nonexistent-dir/report.csv"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("/nonexistent-dir/report.csv"));
    assert!(output.stdout.is_empty());
}

#[test]
fn missing_config_file_exits_three() {
    let status = cli().args(["--config", "/nonexistent-dir/run.toml"]).status().unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn example_config_matches_defaults() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/example.toml");
    let cfg = pseudosim::experiment::ExperimentConfig::from_file(&path).unwrap();
    assert_eq!(cfg, pseudosim::experiment::ExperimentConfig::default());
}
