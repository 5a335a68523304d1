//! End-to-end CLI tests: golden values, determinism, schemas, exit codes.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cycleweights"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn uniform_norms_are_zero() {
    let text = stdout(&["normalize", "--family", "uniform", "--n-grid", "1,2,3,4,5"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,log_h"));
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], (i + 1).to_string());
        assert_eq!(cells[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn golden_cycle_count_pmf() {
    // Constant weights theta = 2 at n = 2: P(K=1) = 1/3, P(K=2) = 2/3.
    let text = stdout(&[
        "dist", "--family", "ewens", "--theta", "2", "--statistic", "K", "--n", "2",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,probability,log_probability");
    let row1: Vec<&str> = lines[1].split(',').collect();
    let row2: Vec<&str> = lines[2].split(',').collect();
    assert!((row1[1].parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((row2[1].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn l1_pmf_is_uniform_for_unit_weights() {
    let text = stdout(&[
        "dist", "--family", "uniform", "--statistic", "L1", "--n", "5",
    ]);
    let mut total = 0.0;
    for line in text.lines().skip(1) {
        let p: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((p - 0.2).abs() < 1e-15);
        total += p;
    }
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn csv_floats_round_trip() {
    let text = stdout(&[
        "normalize", "--family", "ewens", "--theta", "2", "--n-grid", "2",
    ]);
    let printed = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let parsed: f64 = printed.parse().unwrap();
    // 17 significant digits reproduce the printed value bit for bit.
    assert_eq!(format!("{parsed:.16e}"), printed);
    assert!((parsed - 3.0_f64.ln()).abs() < 1e-15);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "sample", "--family", "ewens", "--theta", "2", "--n", "50", "--samples", "500", "--seed",
        "99", "--j-max", "3",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let c = stdout(&[
        "sample", "--family", "ewens", "--theta", "2", "--n", "50", "--samples", "500", "--seed",
        "100", "--j-max", "3",
    ]);
    assert_ne!(a, c);
}

#[test]
fn raw_samples_satisfy_the_sum_rule() {
    let text = stdout(&[
        "sample", "--raw", "--family", "algebraic", "--gamma", "1", "--n", "40", "--samples",
        "200", "--seed", "5",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sample_index,K,L1,sorted_lengths");
    assert_eq!(lines.len(), 201);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let k: usize = cells[1].parse().unwrap();
        let lengths: Vec<usize> = cells[3].split(';').map(|v| v.parse().unwrap()).collect();
        assert_eq!(lengths.len(), k);
        assert_eq!(lengths.iter().sum::<usize>(), 40);
        let l1: usize = cells[2].parse().unwrap();
        assert!(lengths.contains(&l1));
    }
}

#[test]
fn saddle_header_and_gap_column() {
    let text = stdout(&[
        "saddle",
        "--family",
        "algebraic",
        "--gamma",
        "1",
        "--n-grid",
        "100,1000",
        "--with-exact",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,r_n,I_m1,I_0,I_1,log_h_asymptotic,log_h_exact,delta"
    );
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 8);
        let delta: f64 = cells[7].parse().unwrap();
        assert!(delta.abs() < 0.05);
    }
    // Without --with-exact the optional columns are empty.
    let text = stdout(&["saddle", "--family", "algebraic", "--gamma", "1", "--n", "100"]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[6], "");
    assert_eq!(row[7], "");
    // Closed-form spot value: gamma = 1, n = 3 has r_3 = 1/2 and I_0 = 3.
    let text = stdout(&["saddle", "--family", "algebraic", "--gamma", "1", "--n", "3"]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    assert!((row[3].parse::<f64>().unwrap() - 3.0).abs() < 1e-9);
}

fn schema_required(schema_path: &str) -> Vec<String> {
    let text = std::fs::read_to_string(schema_path).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn json_outputs_match_published_schemas() {
    let root = env!("CARGO_MANIFEST_DIR");
    // Table-shaped commands
    let table_required = schema_required(&format!("{root}/schemas/table.schema.json"));
    for args in [
        vec!["weights", "--family", "uniform", "--n-grid", "1,2,3"],
        vec!["normalize", "--family", "ewens", "--theta", "2", "--n-grid", "1,2"],
        vec!["dist", "--family", "uniform", "--statistic", "K", "--n", "4"],
        vec!["moments", "--family", "uniform", "--n", "6"],
        vec!["saddle", "--family", "algebraic", "--gamma", "1", "--n", "50"],
        vec!["verify", "--family", "super_exp_growth", "--gamma", "1.5", "--n", "50"],
    ] {
        let mut full = args.clone();
        full.extend(["--format", "json"]);
        let text = stdout(&full);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in &table_required {
            assert!(value.get(key).is_some(), "{args:?} missing key {key}");
        }
        assert_eq!(value["command"], args[0]);
        assert!(!value["rows"].as_array().unwrap().is_empty());
    }
    // Batch-shaped command
    let batch_required = schema_required(&format!("{root}/schemas/batch.schema.json"));
    let text = stdout(&[
        "sample", "--family", "uniform", "--n", "20", "--samples", "50", "--seed", "1",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in &batch_required {
        assert!(value.get(key).is_some(), "sample missing key {key}");
    }
    // Family objects validate against the family schema's enum
    let fam_required = schema_required(&format!("{root}/schemas/family.schema.json"));
    for key in &fam_required {
        assert!(value["family"].get(key).is_some());
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"family": {{"family": "ewens", "theta": 1.0}}, "n_grid": [1, 2], "format": "csv"}}"#
    )
    .unwrap();
    // Config alone: theta = 1 so log_theta = 0
    let text = stdout(&["weights", "--config", path.to_str().unwrap()]);
    assert_eq!(text.lines().nth(1).unwrap(), "1,0.0000000000000000e0");
    // Flag overrides theta
    let text = stdout(&[
        "weights",
        "--config",
        path.to_str().unwrap(),
        "--theta",
        "2",
    ]);
    let lt: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(lt, 2.0_f64.ln());
}

#[test]
fn exit_code_2_for_config_errors() {
    // No sizes at all
    let out = run(&["normalize", "--family", "uniform"]);
    assert_eq!(exit_code(&out), 2);
    // Unknown family
    let out = run(&["normalize", "--family", "zeta", "--n", "5"]);
    assert_eq!(exit_code(&out), 2);
    // Gamma outside its regime range
    let out = run(&["normalize", "--family", "super_exp_growth", "--gamma", "0.5", "--n", "5"]);
    assert_eq!(exit_code(&out), 2);
    // Empty n grid from a config file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"family": {"family": "uniform"}, "n_grid": []}"#).unwrap();
    let out = run(&["normalize", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    // Missing statistic for dist
    let out = run(&["dist", "--family", "uniform", "--n", "5"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn exit_code_respects_size_cap_env() {
    let out = bin()
        .args(["normalize", "--family", "uniform", "--n", "200"])
        .env("CYCLEWEIGHTS_MAX_N", "100")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    let out = bin()
        .args(["normalize", "--family", "uniform", "--n", "90"])
        .env("CYCLEWEIGHTS_MAX_N", "100")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn exit_code_3_for_numeric_failures() {
    // Super-exponential growth has no convergent series: the saddle
    // command cannot build a spec for it.
    let out = run(&["saddle", "--family", "super_exp_growth", "--gamma", "1.5", "--n", "50"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn exit_code_4_when_verification_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.json");
    // E(K)/log n sits ~9% off its limit at n = 50; an absurd override
    // must flip that row to fail and the exit code to 4.
    std::fs::write(
        &path,
        r#"{"family": {"family": "uniform"}, "n": 50, "tolerances": {"mean_k_log_rel": 1e-12}}"#,
    )
    .unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 4);
    // The report still lists every row, with the failing one marked.
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(",fail"));
    assert!(text.lines().next().unwrap() == "claim,statistic,distance,tolerance,result");
}

#[test]
fn verify_marks_open_cells_unsupported_not_failed() {
    let out = run(&[
        "verify",
        "--family",
        "sub_exp_growth",
        "--gamma",
        "0.3333333333333333",
        "--n",
        "2000",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let k_row: Vec<&str> = text
        .lines()
        .find(|l| l.contains("no tabulated limit"))
        .expect("open-cell row present")
        .split(',')
        .collect();
    assert_eq!(*k_row.last().unwrap(), "unsupported");
}
