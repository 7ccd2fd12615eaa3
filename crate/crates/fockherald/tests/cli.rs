//! End-to-end tests of the command-line binary: file schemas, manifests,
//! determinism and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockherald"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn suppression_writes_csv_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "suppression",
            "--eta-eff",
            "0.9",
            "--eta-ref",
            "0.1",
            "--n-max",
            "3",
            "--out",
            "run",
        ],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = fs::read_to_string(tmp.path().join("run/suppression.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "eta_eff,eta_ref,n,p_m1");
    // n = 0..=3 for a single cell.
    assert_eq!(lines.count(), 4);
    // The n=2 row carries the frozen misidentification probability.
    let row: Vec<&str> = csv.lines().nth(3).unwrap().split(',').collect();
    assert_eq!(row[2], "2");
    let p: f64 = row[3].parse().unwrap();
    assert!((p - 0.0261).abs() < 1e-12);

    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("run/suppression_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "suppression");
    for output in manifest["outputs"].as_array().unwrap() {
        assert!(tmp
            .path()
            .join("run")
            .join(output.as_str().unwrap())
            .exists());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let out = run(
            &[
                "suppression",
                "--eta-eff",
                "0.8,0.9,0.99",
                "--eta-ref",
                "0.011,0.1,0.5",
                "--n-max",
                "6",
                "--out",
                dir,
            ],
            tmp.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(tmp.path().join("a/suppression.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/suppression.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_parameter_list_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["suppression", "--eta-eff", "", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_range_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["cnot-sweep", "--eta-eff", "0.9:0.99", "--out", "x"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cascade_emits_both_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "cascade",
            "--outputs",
            "8",
            "--eta-eff",
            "0.9",
            "--n-max",
            "2",
            "--out",
            "run",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let correct = fs::read_to_string(tmp.path().join("run/cascade_correct.csv")).unwrap();
    let row = correct.lines().last().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[2], "2");
    let analytic: f64 = fields[3].parse().unwrap();
    let simulated: f64 = fields[4].parse().unwrap();
    assert!((analytic - 0.70875).abs() < 1e-12);
    assert!((analytic - simulated).abs() < 1e-12);
    assert!(tmp.path().join("run/cascade_distribution.csv").exists());
}

#[test]
fn tdm_and_chain_commands_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "tdm",
            "--coupling",
            "0.5",
            "--round-trips",
            "2",
            "--n-max",
            "1",
            "--out",
            "run",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let tdm = fs::read_to_string(tmp.path().join("run/tdm.csv")).unwrap();
    // n=1 rows: m=0 with 0.25 and m=1 with 0.75.
    let m1: Vec<&str> = tdm.lines().last().unwrap().split(',').collect();
    assert_eq!(m1[5], "1");
    assert!((m1[6].parse::<f64>().unwrap() - 0.75).abs() < 1e-12);

    let out = run(
        &[
            "chain",
            "-k",
            "1",
            "--eta-ref",
            "0.1",
            "--eta-eff",
            "0.9",
            "--n-max",
            "2",
            "--out",
            "run",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let chain = fs::read_to_string(tmp.path().join("run/chain.csv")).unwrap();
    let last: Vec<&str> = chain.lines().last().unwrap().split(',').collect();
    assert!((last[4].parse::<f64>().unwrap() - 0.0261).abs() < 1e-12);
    assert!((last[5].parse::<f64>().unwrap() - 0.0261).abs() < 1e-12);
}

#[test]
fn json_format_is_supported() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "suppression",
            "--eta-eff",
            "0.9",
            "--eta-ref",
            "0.1",
            "--n-max",
            "1",
            "--format",
            "json",
            "--out",
            "run",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("run/suppression.json")).unwrap())
            .unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!((rows[1]["p_m1"].as_f64().unwrap() - 0.09).abs() < 1e-12);
}

#[test]
fn validate_passes_on_shipped_gate_and_fails_on_corrupt_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["validate"], tmp.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("cnot-calibration"));
    assert!(!stdout.contains("FAIL"));

    // Corrupt the gate config: detune one reflectivity.
    let config = fockherald::cnot::CnotConfig::standard();
    let mut detuned = config;
    detuned.beamsplitters[3].reflectivity = 0.5;
    let path = tmp.path().join("bad_gate.json");
    fs::write(&path, detuned.to_json().unwrap()).unwrap();
    let out = run(&["validate", "--gate-config", "bad_gate.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn validate_json_report_is_written() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &["validate", "--format", "json", "--out", "report"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("report/validate_report.json")).unwrap(),
    )
    .unwrap();
    let suites = report.as_array().unwrap();
    assert!(suites.len() >= 6);
    assert!(suites.iter().all(|s| s["passed"].as_bool().unwrap()));
    assert!(tmp.path().join("report/validate_manifest.json").exists());
}

#[test]
fn probes_only_sweep_matches_nondiscriminating_cross_section() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "cnot-sweep",
            "--eta-eff",
            "0.95",
            "--eta-ref",
            "1.0",
            "--probes-only",
            "--out",
            "chain",
        ],
        tmp.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(
        &[
            "cnot-sweep",
            "--eta-eff",
            "0.95",
            "--detector-model",
            "nondiscriminating",
            "--probes-only",
            "--out",
            "plain",
        ],
        tmp.path(),
    );
    assert!(out.status.success());

    let parse_metrics = |name: &str| -> Vec<f64> {
        let text = fs::read_to_string(tmp.path().join(name)).unwrap();
        text.lines()
            .nth(1)
            .unwrap()
            .split(',')
            .take(5)
            .map(|v| v.parse().unwrap())
            .collect()
    };
    let chain = parse_metrics("chain/cnot_sweep.csv");
    let plain = parse_metrics("plain/cnot_sweep.csv");
    for (a, b) in chain.iter().zip(plain.iter()) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
