//! Fit the positivity-constrained partition-of-unity interpolant to
//! scattered samples of a smooth test function and report its accuracy.
//!
//! Run with: cargo run --example fit_surface

use pcpu::metrics::{error_report, eval_grid, random_nodes};
use pcpu::pu::{self, PuConfig, PuMode};
use pcpu::{KernelFamily, KernelSpec, Rect, TestFunction};

fn main() {
    let n = 300;
    let points = random_nodes(n, 1);
    let values: Vec<f64> = points.iter().map(|p| TestFunction::F1.eval(p)).collect();

    let kernel = KernelSpec::new(KernelFamily::WendlandC2, 0.1).unwrap();
    let grid = eval_grid(80, Rect::UNIT);

    // Passing the evaluation grid up front folds it into each patch's
    // negativity check set.
    let config = PuConfig::new(kernel, PuMode::Positive);
    let model = pu::fit_with_eval(&points, &values, &grid, config).unwrap();

    let approx = model.evaluate(&grid).unwrap();
    let truth: Vec<f64> = grid.iter().map(|p| TestFunction::F1.eval(p)).collect();
    let report = error_report(&truth, &approx).unwrap();

    let constrained = model
        .constraints_per_patch()
        .iter()
        .filter(|&&k| k > 0)
        .count();
    println!("fitted {n} samples across {} patches", model.grid.d());
    println!("patches needing positivity constraints: {constrained}");
    println!("MAE  {:.4e}", report.mae);
    println!("RMSE {:.4e}", report.rmse);
    println!(
        "min value on the 80x80 grid: {:.4e} ({} negatives)",
        report.min_value, report.n_negative
    );
}
