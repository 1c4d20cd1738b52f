//! End-to-end checks of the `swingnet` binary: exit codes, artifact schemas,
//! golden-file determinism of the matrix pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn swingnet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swingnet"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

const TINY_CONFIG: &str = r#"
seeds = [1]
horizon_T = 2.0

[sim]
damping = 0.8
coupling = 1.0
dt = 0.001
t_end = 5.0
control_period = 0.01

[[networks]]
kind = "SP"
n = 20

[[networks]]
kind = "SF"
n = 20
m = 2

[[disturbances]]
kind = "impulse"

[[disturbances]]
kind = "oscillatory_decay"

[[controllers]]
name = "constant"
kind = "constant"

[[controllers]]
name = "adaptive"
kind = "adaptive"
"#;

#[test]
fn shipped_config_matches_builtin_default() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/reference.toml");
    let text = std::fs::read_to_string(path).expect("configs/reference.toml ships with the repo");
    let cfg = swingnet::xplab::config::ExperimentConfig::from_toml_str(&text).unwrap();
    assert_eq!(cfg, swingnet::xplab::config::ExperimentConfig::reference());
}

#[test]
fn unknown_subcommand_and_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = swingnet(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = swingnet(&["generate", "--bogus-flag"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = swingnet(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn validation_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // dt that does not divide the control period.
    let out = swingnet(
        &["simulate", "--network", "star", "--n", "10", "--dt", "0.003"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn generate_writes_canonical_network_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = swingnet(
        &["generate", "--network", "er", "--n", "30", "--p", "0.2", "--seed", "5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("out/networks/ER-n30-s5.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["kind"], "ER");
    assert_eq!(json["n"], 30);
    assert_eq!(json["seed"], 5);
    assert!((json["params"]["p"].as_f64().unwrap() - 0.2).abs() < 1e-15);
    let edges = json["edges"].as_array().unwrap();
    assert!(!edges.is_empty());
    // Canonical ordering: i < j, lexicographic.
    let pairs: Vec<(u64, u64)> = edges
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    assert_eq!(pairs, sorted);
    assert!(pairs.iter().all(|(i, j)| i < j));
}

#[test]
fn spectrum_emits_eigenvalue_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = swingnet(&["spectrum", "--network", "star", "--n", "25"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/spectra/SP-n25-s1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,lambda_k"));
    assert_eq!(csv.trim_end().lines().count(), 26);
    let last = csv.trim_end().lines().last().unwrap();
    assert!(last.starts_with("25,"), "largest eigenvalue row: {last}");
    assert!((last.split(',').nth(1).unwrap().parse::<f64>().unwrap() - 25.0).abs() < 1e-8);
    // The n×n eigenvector payload appears only behind the flag.
    assert!(!dir.path().join("out/spectra/SP-n25-s1-eigenvectors.csv").exists());
    let out = swingnet(
        &["spectrum", "--network", "star", "--n", "25", "--eigenvectors"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let vecs =
        std::fs::read_to_string(dir.path().join("out/spectra/SP-n25-s1-eigenvectors.csv")).unwrap();
    assert_eq!(vecs.trim_end().lines().count(), 26);
    assert!(vecs.starts_with("node,v_1,v_2"));
}

#[test]
fn simulate_report_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = swingnet(
        &[
            "simulate",
            "--network",
            "star",
            "--n",
            "30",
            "--disturbance",
            "impulse",
            "--controller",
            "constant",
            "--t-end",
            "4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report_path = dir.path().join("out/runs/SP-n30-s1-impulse-constant.json");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    // Report schema: network identity, metrics, stability, M range.
    let report = &json["report"];
    for key in [
        "network",
        "disturbance",
        "controller",
        "H_T",
        "H_inf",
        "tau",
        "max_real_part",
        "stability_pass",
        "M_range",
    ] {
        assert!(!report[key].is_null(), "missing report key {key}");
    }
    for key in ["kind", "n", "params", "seed"] {
        assert!(!report["network"][key].is_null(), "missing network key {key}");
    }
    assert!(json["config_hash"].is_string());
    assert!(json["probes"].as_array().unwrap().len() == 5);
    // Trajectory CSV alongside.
    let traj = std::fs::read_to_string(
        dir.path().join("out/trajectories/SP-n30-s1-impulse-constant.csv"),
    )
    .unwrap();
    assert!(traj.starts_with("t,M,H_cum,eta_30,eta_29,eta_28,eta_27,eta_26"));
    assert_eq!(traj.trim_end().lines().count(), 4002);
}

#[test]
fn tune_prints_baseline_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = swingnet(&["tune", "--network", "star", "--n", "100"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lambda_max: 100"), "{stdout}");
    assert!(stdout.contains("M0: 0.0016"), "{stdout}");
    assert!(stdout.contains("stability_gain_bound:"), "{stdout}");
    assert!(stdout.contains("rate_gain_bound:"), "{stdout}");
    assert!(stdout.contains("tuned_gain:"), "{stdout}");
}

#[test]
fn matrix_emits_tables_and_report_rerenders_identically() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("exp.toml"), TINY_CONFIG).unwrap();
    let out = swingnet(
        &["matrix", "--config", "exp.toml", "--out", "results"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let results = dir.path().join("results");

    // 2 networks × 2 disturbances × 2 controllers × 1 seed.
    let runs: Vec<_> = std::fs::read_dir(results.join("runs")).unwrap().collect();
    assert_eq!(runs.len(), 8, "no silent omission of matrix cells");
    let trajs: Vec<_> = std::fs::read_dir(results.join("trajectories")).unwrap().collect();
    assert_eq!(trajs.len(), 8);

    let inertia = std::fs::read_to_string(results.join("tables/inertia.csv")).unwrap();
    assert_eq!(inertia.trim_end().lines().count(), 2 + 8); // comment + header + rows
    let comparison = std::fs::read_to_string(results.join("tables/comparison.csv")).unwrap();
    assert_eq!(comparison.trim_end().lines().count(), 2 + 4);
    let summary = std::fs::read_to_string(results.join("tables/summary.csv")).unwrap();
    assert_eq!(summary.trim_end().lines().count(), 2 + 2);

    // `report` re-renders the same bytes from the stored run records.
    let before = [
        inertia.clone(),
        comparison.clone(),
        summary.clone(),
    ];
    std::fs::remove_file(results.join("tables/inertia.csv")).unwrap();
    std::fs::remove_file(results.join("tables/comparison.csv")).unwrap();
    std::fs::remove_file(results.join("tables/summary.csv")).unwrap();
    let out = swingnet(&["report", "--out", "results"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let after = [
        std::fs::read_to_string(results.join("tables/inertia.csv")).unwrap(),
        std::fs::read_to_string(results.join("tables/comparison.csv")).unwrap(),
        std::fs::read_to_string(results.join("tables/summary.csv")).unwrap(),
    ];
    assert_eq!(before, after, "re-rendered tables must be byte-identical");

    // Emitted CSVs parse and re-emit byte-identically.
    for text in &after {
        let table = swingnet::xplab::csv::CsvTable::parse(text).unwrap();
        assert_eq!(&table.emit().unwrap(), text);
    }

    // summary.json carries the config hash and completion counts.
    let summary_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(results.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary_json["cells_expected"], 8);
    assert_eq!(summary_json["cells_completed"], 8);
    assert!(summary_json["config_hash"].is_string());
}

#[test]
fn matrix_exits_nonzero_when_cells_fail() {
    let dir = tempfile::tempdir().unwrap();
    // Node-directed impulse on a ring with a horizon too short for H to
    // converge: cells fail with the advisory error, exit code 1.
    let config = r#"
seeds = [1]
horizon_T = 1.0

[sim]
damping = 0.8
coupling = 1.0
dt = 0.001
t_end = 2.0
control_period = 0.01

[[networks]]
kind = "RG"
n = 20
d = 4

[[disturbances]]
kind = "impulse"
[disturbances.direction]
node = 0

[[controllers]]
name = "constant"
kind = "constant"
"#;
    std::fs::write(dir.path().join("bad.toml"), config).unwrap();
    let out = swingnet(&["matrix", "--config", "bad.toml", "--out", "r2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("r2/summary.json")).unwrap(),
    )
    .unwrap();
    assert!(!summary["failures"].as_array().unwrap().is_empty());
}
