//! End-to-end harness tests: config/CSV round trips, experiment outputs,
//! determinism across runs, and the installed binary's subcommands.

use std::fs;
use std::path::Path;
use std::process::Command;

use pcpu::cli::{self, Config, Method};
use pcpu::Point2;

fn synthetic_config(dir: &Path) -> Config {
    toml::from_str::<Config>(&format!(
        r#"
            methods = ["pcpu", "shepard"]
            kernel = "wendland"
            eps = 0.1
            n = 120
            seed = 7
            function = "f1"
            eval_side = 20
            output_dir = "{}"
        "#,
        dir.display()
    ))
    .unwrap()
}

#[test]
fn experiment_writes_outputs_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let dir_a = tmp.path().join("a");
    let dir_b = tmp.path().join("b");
    let report_a = cli::run_experiment(&synthetic_config(&dir_a)).unwrap();
    let report_b = cli::run_experiment(&synthetic_config(&dir_b)).unwrap();

    for dir in [&dir_a, &dir_b] {
        assert!(dir.join("report.json").is_file());
        assert!(dir.join("pcpu_grid.csv").is_file());
        assert!(dir.join("shepard_grid.csv").is_file());
    }
    // The numeric section is byte-identical across runs; timings are not.
    assert_eq!(
        report_a.results_json().unwrap(),
        report_b.results_json().unwrap()
    );
    assert_eq!(
        fs::read(dir_a.join("pcpu_grid.csv")).unwrap(),
        fs::read(dir_b.join("pcpu_grid.csv")).unwrap()
    );
    let pcpu = &report_a.results["pcpu"];
    assert_eq!(pcpu.n_eval, 400);
    assert!(pcpu.min_value >= -1e-10);
    assert_eq!(pcpu.n_negative, 0);
    assert!(pcpu.rmse.unwrap() > 0.0);
}

#[test]
fn grid_csv_round_trip_is_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("grid.csv");
    let points = vec![
        Point2::new(0.125, 0.25),
        Point2::new(0.7071067811865476, 0.1),
        Point2::new(1.0, 0.0),
    ];
    let values = vec![0.0, 1.5e-13, 2.25];
    cli::write_grid_csv(&path, &points, &values).unwrap();
    let (p2, v2) = cli::load_csv(&path).unwrap();
    assert_eq!(points, p2);
    assert_eq!(values, v2);
}

#[test]
fn csv_errors_carry_the_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.csv");
    fs::write(&path, "x,y,f\n0.1,0.2,0.3\n0.4,oops,0.6\n").unwrap();
    let err = cli::load_csv(&path).unwrap_err().to_string();
    assert!(err.contains(":3:"), "missing line number: {err}");
}

#[test]
fn data_mode_reports_without_error_metrics() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("data.csv");
    let mut body = String::from("x,y,f\n");
    // A deterministic scattered nonnegative dataset.
    for i in 0..40u32 {
        let x = (i as f64 * 0.61803398875).fract();
        let y = (i as f64 * 0.3819660113).fract();
        let f = (x - 0.5).powi(2) + (y - 0.5).powi(2);
        body.push_str(&format!("{x},{y},{f}\n"));
    }
    fs::write(&csv, body).unwrap();
    let mut config = synthetic_config(&tmp.path().join("out"));
    config.methods = vec![Method::Pcpu];
    config.function = None;
    config.n = None;
    config.data = Some(csv);
    let report = cli::run_experiment(&config).unwrap();
    let r = &report.results["pcpu"];
    assert!(r.mae.is_none() && r.rmse.is_none());
    assert!(r.min_value >= -1e-10);
}

#[test]
fn unknown_method_in_config_is_rejected() {
    let err = toml::from_str::<Config>(
        r#"
            methods = ["kriging"]
            kernel = "imq"
            eps = 1.0
        "#,
    )
    .unwrap_err()
    .to_string();
    assert!(err.contains("kriging") || err.contains("unknown variant"));
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pcpu"))
}

#[test]
fn binary_fit_subcommand_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("exp.toml");
    fs::write(
        &config_path,
        r#"
            methods = ["pcpu"]
            kernel = "imq"
            eps = 1.0
            n = 80
            function = "f2"
            eval_side = 15
        "#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let output = bin()
        .args(["fit", "--config"])
        .arg(&config_path)
        .args(["--seed", "3"])
        .arg("--output-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(String::from_utf8_lossy(&output.stdout).contains("pcpu:"));
    assert!(out_dir.join("report.json").is_file());
}

#[test]
fn binary_compare_subcommand_prints_table() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("exp.toml");
    fs::write(
        &config_path,
        r#"
            methods = ["pcpu", "shepard"]
            kernel = "wendland"
            eps = 0.1
            function = "f1"
            eval_side = 12
        "#,
    )
    .unwrap();
    let output = bin()
        .args(["compare", "--config"])
        .arg(&config_path)
        .args(["--n-list", "60,100"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let table = String::from_utf8_lossy(&output.stdout).to_string();
    assert!(table.contains("pcpu") && table.contains("shepard"));
    assert!(table.contains("60") && table.contains("100"));
}

#[test]
fn binary_eco_surface_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("surface.csv");
    let output = bin()
        .args([
            "eco-surface",
            "--a",
            "1.2",
            "--b",
            "0.4",
            "--n-side",
            "3",
            "--t-end",
            "50",
            "--dt",
            "1",
        ])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let (points, values) = cli::load_csv(&out).unwrap();
    assert_eq!(points.len(), 9);
    assert!(values.iter().all(|&v| v >= 0.0));
}

#[test]
fn binary_rejects_bad_config() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("bad.toml");
    fs::write(&config_path, "methods = [\"pcpu\"]\nkernel = \"imq\"\n").unwrap();
    let output = bin()
        .args(["fit", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("error:"));
}
