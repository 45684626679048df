//! End-to-end tests of the command-line interface.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-ising"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header line")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let idx = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("column {name} missing from {header:?}"));
    row[idx].parse().unwrap_or_else(|_| panic!("non-numeric {name} = {}", row[idx]))
}

#[test]
fn sweep_grid_covers_requested_window() {
    let text = stdout_of(&[
        "sweep", "--s", "5", "--k", "3", "--phi-min", "0.8", "--phi-max", "1.4", "--points", "8",
    ]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        header.join(","),
        "s,k,phi,tau_p,tau_q,dobrushin,lambda2,ks,lambda_max,fprime1,h_psi,h_phi,regime"
    );
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert_eq!(row[0], "5");
        assert_eq!(row[1], "3");
    }
    assert_eq!(field(&header, &rows[0], "phi"), 0.8);
    assert_eq!(field(&header, &rows[7], "phi"), 1.4);
    let mid = field(&header, &rows[4], "phi");
    assert!((mid - 0.8 * (1.4f64 / 0.8).powf(4.0 / 7.0)).abs() <= 1e-12);
}

#[test]
fn sweep_row_at_phi_one_is_degenerate() {
    let text = stdout_of(&["sweep", "--s", "2", "--k", "3", "--phi", "1"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(field(&header, row, "tau_p"), 0.0);
    assert_eq!(field(&header, row, "tau_q"), 0.0);
    assert_eq!(field(&header, row, "lambda2"), 0.0);
    assert_eq!(field(&header, row, "dobrushin"), -1.0);
    assert_eq!(field(&header, row, "ks"), -1.0);
    assert!((field(&header, row, "h_psi") - std::f64::consts::LN_2).abs() <= 1e-12);
    assert_eq!(row.last().unwrap(), "Boundary");
}

#[test]
fn sweep_ks_changes_sign_across_the_upper_root() {
    let text = stdout_of(&["sweep", "--s", "5", "--phi-min", "1.28", "--phi-max", "1.30", "--points", "2", "--scale", "linear"]);
    let (header, rows) = parse_csv(&text);
    assert!(field(&header, &rows[0], "ks") < 0.0);
    assert!(field(&header, &rows[1], "ks") > 0.0);
    assert_eq!(*rows[0].last().unwrap(), "F3");
    assert_eq!(*rows[1].last().unwrap(), "F4");
}

#[test]
fn sweep_output_is_byte_deterministic() {
    let args = [
        "sweep", "--s", "1-3", "--phi-min", "0.5", "--phi-max", "2.0", "--points", "5",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn sweep_lambda_identity_holds_on_every_row() {
    let text = stdout_of(&[
        "sweep", "--s", "1,3,5", "--phi-min", "0.4", "--phi-max", "2.5", "--points", "7",
    ]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 21);
    for row in &rows {
        let k = field(&header, row, "k");
        let lambda2 = field(&header, row, "lambda2");
        let lambda_max = field(&header, row, "lambda_max");
        let fprime1 = field(&header, row, "fprime1");
        assert!((lambda_max * lambda_max - k * k * lambda2).abs() <= 1e-9 * (1.0 + fprime1));
        assert!((lambda_max * lambda_max - fprime1).abs() <= 1e-9 * (1.0 + fprime1));
    }
}

#[test]
fn thresholds_ks_match_published_table() {
    let text = stdout_of(&["thresholds", "--s", "1-5", "--criterion", "ks"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.join(","), "s,criterion,phi_low,phi_high");
    let expected = [
        (0.3453, 2.8957),
        (0.5615, 1.7809),
        (0.6692, 1.4943),
        (0.7341, 1.3622),
        (0.7776, 1.2861),
    ];
    assert_eq!(rows.len(), 5);
    for (row, (lo, hi)) in rows.iter().zip(expected) {
        assert_eq!(row[1], "ks");
        assert!((field(&header, row, "phi_low") - lo).abs() <= 5e-4);
        assert!((field(&header, row, "phi_high") - hi).abs() <= 5e-4);
    }
}

#[test]
fn thresholds_all_emits_three_rows_per_spin() {
    let text = stdout_of(&["thresholds", "--s", "2", "--criterion", "all"]);
    let (_, rows) = parse_csv(&text);
    let labels: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(labels, ["stability", "dobrushin", "ks"]);
}

#[test]
fn classify_reports_regime_and_thresholds() {
    let text = stdout_of(&["classify", "--s", "5", "--k", "3", "--phi", "1.15"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        header.join(","),
        "s,k,phi,regime,stab_low,stab_high,dob_low,dob_high,ks_low,ks_high"
    );
    let row = &rows[0];
    assert_eq!(row[3], "F2");
    assert!(field(&header, row, "stab_high") < 1.15);
    assert!(field(&header, row, "dob_high") > 1.15);

    let anti = stdout_of(&["classify", "--s", "5", "--phi", "0.7"]);
    let (_, rows) = parse_csv(&anti);
    assert_eq!(rows[0][3], "AF4");
}

#[test]
fn fixed_points_census_at_the_coexistence_point() {
    let text = stdout_of(&["fixed-points", "--s", "5", "--k", "3", "--phi", "1.12434"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header[..3].join(","), "z_star,derivative_abs,stability");
    let spin_cols: Vec<&str> = header[3..].iter().map(String::as_str).collect();
    assert_eq!(
        spin_cols,
        ["x_-5", "x_-4", "x_-3", "x_-2", "x_-1", "x_1", "x_2", "x_3", "x_4", "x_5"]
    );
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], "1");
    assert_eq!(rows[1][2], "repelling");
    assert_eq!(rows[0][2], "attracting");
    assert_eq!(rows[2][2], "attracting");
    let low = field(&header, &rows[0], "z_star");
    let high = field(&header, &rows[2], "z_star");
    assert!((low * high - 1.0).abs() <= 1e-6);
}

#[test]
fn fixed_points_unique_in_the_stable_regime() {
    let text = stdout_of(&["fixed-points", "--s", "5", "--phi", "1.05"]);
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1");
    assert_eq!(rows[0][2], "attracting");
}

#[test]
fn entropy_matches_the_library_closed_form() {
    let text = stdout_of(&["entropy", "--s", "1", "--phi", "2"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.join(","), "s,k,phi,h_psi,h_phi");
    let p: f64 = 163.0 / 251.0;
    let expected = -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
    assert!((field(&header, &rows[0], "h_psi") - expected).abs() <= 1e-12);
    assert!(field(&header, &rows[0], "h_phi") <= 3.0f64.ln() + 1e-12);
}

#[test]
fn json_keys_mirror_csv_columns_for_every_subcommand() {
    let cases: [&[&str]; 5] = [
        &["sweep", "--s", "2", "--phi", "1.3"],
        &["thresholds", "--s", "2", "--criterion", "dobrushin"],
        &["classify", "--s", "2", "--phi", "1.3"],
        &["fixed-points", "--s", "2", "--phi", "1.3"],
        &["entropy", "--s", "2", "--phi", "1.3"],
    ];
    for case in cases {
        let csv = stdout_of(case);
        let (header, _) = parse_csv(&csv);
        let mut json_args = case.to_vec();
        json_args.extend(["--format", "json"]);
        let json = stdout_of(&json_args);
        let rows: serde_json::Value = serde_json::from_str(&json).expect("valid json");
        let first = rows
            .as_array()
            .and_then(|a| a.first())
            .and_then(|v| v.as_object())
            .expect("array of objects");
        let keys: Vec<&str> = first.keys().map(String::as_str).collect();
        assert_eq!(keys, header, "subcommand {case:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = std::env::temp_dir().join("cayley-ising-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("sweep.csv");
    let args = ["sweep", "--s", "1", "--phi-min", "0.9", "--phi-max", "1.1", "--points", "3"];
    let streamed = stdout_of(&args);
    let mut file_args = args.to_vec();
    let path_str = path.to_str().expect("utf-8 path");
    file_args.extend(["--out", path_str]);
    let out = run(&file_args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).expect("file written");
    assert_eq!(written, streamed);
    std::fs::remove_file(&path).ok();
}

#[test]
fn usage_errors_exit_with_code_two() {
    let missing_phi = run(&["sweep", "--s", "1"]);
    assert_eq!(missing_phi.status.code(), Some(2));
    let conflict = run(&["sweep", "--s", "1", "--phi", "1.2", "--phi-min", "0.5", "--phi-max", "2.0"]);
    assert_eq!(conflict.status.code(), Some(2));
    let unknown = run(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    let bad_list = run(&["sweep", "--s", "5-1", "--phi", "1.2"]);
    assert_eq!(bad_list.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_code_three() {
    let zero_phi = run(&["sweep", "--s", "1", "--phi", "0"]);
    assert_eq!(zero_phi.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&zero_phi.stderr).starts_with("error:"));
    let big_spin = run(&["entropy", "--s", "11", "--phi", "1.1"]);
    assert_eq!(big_spin.status.code(), Some(3));
    let no_roots = run(&["fixed-points", "--s", "5", "--phi", "1.05", "--z-min", "100", "--z-max", "1000"]);
    assert_eq!(no_roots.status.code(), Some(3));
    let bad_branching = run(&["classify", "--s", "2", "--k", "1", "--phi", "1.2"]);
    assert_eq!(bad_branching.status.code(), Some(3));
}
