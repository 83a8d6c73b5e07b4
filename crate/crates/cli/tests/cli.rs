//! End-to-end checks of the binary: exit codes, file formats, and flag
//! precedence.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_qsp-energy")
}

fn run(args: &[&str]) -> Output {
    Command::new(exe()).args(args).output().expect("binary runs")
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qsp-energy-cli-tests").join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn identity_json(dim: usize) -> String {
    let re: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let im = vec![vec![0.0; dim]; dim];
    serde_json::to_string(&serde_json::json!({"dim": dim, "re": re, "im": im})).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["sweep"]).status.code(), Some(2), "missing --encoding");
    assert_eq!(
        run(&["sweep", "--encoding", "qudit", "--dims", "2", "--samples", "0"])
            .status
            .code(),
        Some(2),
        "zero samples is a usage error"
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn validation_errors_exit_3() {
    assert_eq!(run(&["counts", "--n", "1"]).status.code(), Some(3));
    let dir = workdir("exit3");
    let path = dir.join("nonunitary.json");
    fs::write(
        &path,
        r#"{"dim":2,"re":[[1.0,0.0],[0.0,0.5]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = run(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("Frobenius defect"),
        "error must name the defect: {stderr}"
    );
}

#[test]
fn io_and_parse_errors_exit_4() {
    let dir = workdir("exit4");
    let path = dir.join("broken.json");
    fs::write(&path, "{this is not json").unwrap();
    assert_eq!(
        run(&["decompose", "--input", path.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        run(&["decompose", "--input", dir.join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn decompose_identity_reports_bar_state_energy() {
    let dir = workdir("decompose");
    let input = dir.join("id4.json");
    fs::write(&input, identity_json(4)).unwrap();
    let program_path = dir.join("program.json");
    let out = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--check",
        "--out",
        program_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let program: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&program_path).unwrap()).unwrap();
    let crossings = program["crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 6);
    assert!(crossings
        .iter()
        .all(|c| c["theta"].as_f64().unwrap() == 0.0));

    // Energy report on stdout: six bar-state crossings, zero output phases.
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report is JSON");
    let total = report["total_j"].as_f64().unwrap();
    assert!((total - 6.0 * 88.2e-9).abs() < 1e-15);

    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("roundtrip_frobenius_error="));
    let err_value: f64 = stderr
        .trim()
        .rsplit('=')
        .next()
        .unwrap()
        .parse()
        .expect("parsable error value");
    assert!(err_value < 1e-10);
}

#[test]
fn decompose_haar_check_stays_within_tolerance() {
    // A non-trivial 6x6 unitary produced by the library itself.
    let u = qsp_energy::haar_unitary(6, qsp_energy::RngStream::new(99, 0)).unwrap();
    let json = serde_json::to_string(&qsp_energy::io::MatrixJson::from_matrix(&u)).unwrap();
    let dir = workdir("haar6");
    let input = dir.join("u6.json");
    fs::write(&input, json).unwrap();
    let out = run(&[
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--check",
        "--out",
        dir.join("p.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let err_value: f64 = stderr.trim().rsplit('=').next().unwrap().parse().unwrap();
    assert!(err_value < 1e-10, "roundtrip error {err_value}");
}

#[test]
fn counts_csv_matches_reference_rows() {
    let out = run(&["counts", "--n", "2..8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,bergholm,plesch,modified"));
    assert_eq!(lines.clone().count(), 7);
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "2");
    assert_eq!(first[2], "1.5");
    assert_eq!(first[3], "3.5");
}

#[test]
fn sweep_json_mirrors_csv_rows() {
    let csv = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2,4", "--samples", "30", "--seed", "5",
    ]);
    let json = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2,4", "--samples", "30", "--seed", "5",
        "--format", "json",
    ]);
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let second_line: Vec<&str> = csv_text.lines().nth(1).unwrap().split(',').collect();
    let csv_mean: f64 = second_line[3].parse().unwrap();
    let json_mean = rows[0]["mean_energy_j"].as_f64().unwrap();
    assert_eq!(csv_mean, json_mean);
    assert_eq!(rows[0]["encoding"], "qudit");
    assert_eq!(rows[0]["seed"], 5);
}

#[test]
fn sweep_svg_is_single_self_contained_file() {
    let out = run(&[
        "sweep",
        "--encoding",
        "qudit,qubit-programmable,qubit-dedicated",
        "--dims",
        "4,8,16",
        "--qubits",
        "2,3,4",
        "--samples",
        "40",
        "--seed",
        "3",
        "--format",
        "svg",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<svg").count(), 1);
    assert_eq!(svg.matches("<polyline").count(), 3, "one polyline per series");
    assert!(svg.contains("legend") || svg.contains("qudit"));
    assert!(!svg.contains("<script"));
    assert!(!svg.contains("http://") || svg.contains("xmlns"), "no external assets");
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = workdir("config");
    let config_path = dir.join("config.json");
    fs::write(
        &config_path,
        r#"{"seed": 7, "samples": 25, "v_pi": 2.8}"#,
    )
    .unwrap();

    // Config seed applies when no flag is given.
    let from_config = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2", "--config",
        config_path.to_str().unwrap(),
    ]);
    let text = String::from_utf8(from_config.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[6], "7", "seed from config");
    assert_eq!(row[5], "25", "samples from config");
    let config_mean: f64 = row[3].parse().unwrap();

    // A flag beats the config.
    let flag_wins = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2", "--config",
        config_path.to_str().unwrap(), "--seed", "11",
    ]);
    let text = String::from_utf8(flag_wins.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[6], "11", "flag seed wins");

    // Doubling v_pi (2.8 in config) quadruples the energy of the same
    // seeded sweep run without the config.
    let default_run = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2", "--samples", "25", "--seed", "7",
    ]);
    let default_text = String::from_utf8(default_run.stdout).unwrap();
    let default_mean: f64 = default_text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert!((config_mean - 4.0 * default_mean).abs() < 1e-12 * config_mean);

    // Unknown keys are rejected as parse failures.
    fs::write(&config_path, r#"{"sede": 7}"#).unwrap();
    let bad = run(&[
        "sweep", "--encoding", "qudit", "--dims", "2", "--config",
        config_path.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn verify_reports_converged_fits() {
    let out = run(&["verify", "--n", "2", "--targets", "8", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["targets"], 8);
    assert_eq!(report["all_converged"], true);
    assert!(report["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert_eq!(report["results"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_accepts_target_file() {
    let dir = workdir("target");
    let path = dir.join("plus.json");
    let amp = 1.0 / 2f64.sqrt();
    fs::write(
        &path,
        serde_json::to_string(&serde_json::json!({
            "n": 1, "re": [amp, amp], "im": [0.0, 0.0]
        }))
        .unwrap(),
    )
    .unwrap();
    // A single-qubit target needs a template; n=2 template with the target
    // embedded in a 2-qubit register is out of scope, so check the error
    // path is a clean validation failure rather than a crash.
    let out = run(&[
        "verify",
        "--n",
        "2",
        "--target-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}
