//! Drive the experiment harness from code: write a scattered dataset to
//! CSV, build a config, run the multi-method experiment, and read back the
//! deterministic JSON report — the same pipeline the `pcpu fit` subcommand
//! exposes on the command line.
//!
//! Run with: cargo run --release --example csv_experiment

use pcpu::cli::{self, Config, Method};
use pcpu::metrics::random_nodes;
use pcpu::TestFunction;

fn main() {
    let dir = std::env::temp_dir().join("pcpu_csv_experiment");
    std::fs::create_dir_all(&dir).unwrap();

    // A nonnegative dataset on disk, as a user of the CLI would supply.
    let points = random_nodes(200, 11);
    let values: Vec<f64> = points.iter().map(|p| TestFunction::F2.eval(p)).collect();
    let csv = dir.join("samples.csv");
    cli::write_grid_csv(&csv, &points, &values).unwrap();

    let config = Config {
        methods: vec![Method::Pcpu, Method::Pu, Method::Shepard],
        kernel: "wendland".into(),
        eps: 0.1,
        n: None,
        seed: 1,
        d_override: None,
        function: None, // data mode: no ground truth, so no MAE/RMSE
        data: Some(csv),
        eval_side: 40,
        shepard_power: 2.0,
        output_dir: dir.clone(),
    };

    let report = cli::run_experiment(&config).unwrap();
    println!("{}", report.results_json().unwrap());
    println!("grids and report.json written to {}", dir.display());

    let pcpu = &report.results["pcpu"];
    assert!(pcpu.min_value >= -1e-10, "constrained fit went negative");
}
