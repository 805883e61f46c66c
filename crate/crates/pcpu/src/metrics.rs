//! Test functions, error metrics, the evaluation grid, and seeded node
//! generation for the experiment harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::Rect;
use crate::Point2;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("value vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("value vectors must be nonempty")]
    Empty,
}

/// Benchmark test functions, both nonnegative on the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TestFunction {
    /// `(x - 0.5)^2 + (y - 0.4)^2`
    F1,
    /// `[3 (y - 0.4) sin(x - 0.5)]^2 (y + 0.5)^(1/3)`
    F2,
}

impl TestFunction {
    pub fn eval(&self, p: &Point2) -> f64 {
        match self {
            TestFunction::F1 => (p.x - 0.5).powi(2) + (p.y - 0.4).powi(2),
            TestFunction::F2 => {
                let s = 3.0 * (p.y - 0.4) * (p.x - 0.5).sin();
                s * s * (p.y + 0.5).cbrt()
            }
        }
    }
}

/// Error summary of an approximant against known values on a grid.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ErrorReport {
    /// Maximum absolute error.
    pub mae: f64,
    /// Root mean square error.
    pub rmse: f64,
    pub n_eval: usize,
    /// Minimum of the approximant itself over the grid.
    pub min_value: f64,
    /// Count of approximant values below `-1e-10`.
    pub n_negative: usize,
}

pub fn error_report(true_values: &[f64], approx_values: &[f64]) -> Result<ErrorReport, MetricsError> {
    if true_values.len() != approx_values.len() {
        return Err(MetricsError::LengthMismatch(
            true_values.len(),
            approx_values.len(),
        ));
    }
    if true_values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut mae: f64 = 0.0;
    let mut sq_sum = 0.0;
    let mut min_value = f64::INFINITY;
    let mut n_negative = 0;
    for (&t, &a) in true_values.iter().zip(approx_values) {
        let d = (t - a).abs();
        mae = mae.max(d);
        sq_sum += d * d;
        min_value = min_value.min(a);
        if a < -1e-10 {
            n_negative += 1;
        }
    }
    Ok(ErrorReport {
        mae,
        rmse: (sq_sum / true_values.len() as f64).sqrt(),
        n_eval: true_values.len(),
        min_value,
        n_negative,
    })
}

/// `n` points uniform in `[0, 1)^2`, reproducible across platforms: the
/// generator is ChaCha8 seeded with `seed`, drawing x then y per point.
pub fn random_nodes(n: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.random::<f64>();
            let y = rng.random::<f64>();
            Point2::new(x, y)
        })
        .collect()
}

/// Uniform `s_side x s_side` grid over the closed rectangle (boundary
/// included), row-major with x varying fastest.
pub fn eval_grid(s_side: usize, domain: Rect) -> Vec<Point2> {
    assert!(s_side >= 2, "evaluation grid needs at least 2 points per side");
    let step_x = domain.width() / (s_side - 1) as f64;
    let step_y = domain.height() / (s_side - 1) as f64;
    let mut out = Vec::with_capacity(s_side * s_side);
    for iy in 0..s_side {
        for ix in 0..s_side {
            out.push(Point2::new(
                domain.x0 + ix as f64 * step_x,
                domain.y0 + iy as f64 * step_y,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn test_function_anchor_values() {
        assert_eq!(TestFunction::F1.eval(&Point2::new(0.5, 0.4)), 0.0);
        assert_abs_diff_eq!(
            TestFunction::F1.eval(&Point2::new(0.0, 0.0)),
            0.41,
            epsilon = 1e-15
        );
        for t in [0.0, 0.3, 0.9] {
            assert_abs_diff_eq!(TestFunction::F2.eval(&Point2::new(t, 0.4)), 0.0);
            assert_abs_diff_eq!(TestFunction::F2.eval(&Point2::new(0.5, t)), 0.0);
        }
    }

    #[test]
    fn test_functions_nonnegative_on_random_samples() {
        for p in random_nodes(10_000, 77) {
            assert!(TestFunction::F1.eval(&p) >= 0.0);
            assert!(TestFunction::F2.eval(&p) >= 0.0);
        }
    }

    #[test]
    fn error_report_cases() {
        let r = error_report(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.mae, 0.0);
        assert_eq!(r.rmse, 0.0);
        assert_eq!(r.n_negative, 0);

        let r = error_report(&[0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.mae, 1.0);
        assert_abs_diff_eq!(r.rmse, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-15);
        assert!(r.rmse <= r.mae);

        let r = error_report(&[1.0], &[0.5]).unwrap();
        assert_eq!(r.mae, 0.5);
        assert_eq!(r.rmse, 0.5);

        assert_eq!(
            error_report(&[1.0], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch(1, 2))
        );
        assert_eq!(error_report(&[], &[]), Err(MetricsError::Empty));
    }

    #[test]
    fn random_nodes_deterministic_and_in_range() {
        let a = random_nodes(300, 1);
        let b = random_nodes(300, 1);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|p| (0.0..1.0).contains(&p.x) && (0.0..1.0).contains(&p.y)));
        assert_ne!(a, random_nodes(300, 2));
    }

    // Golden regression anchor: first node of (N=300, seed=1), frozen from
    // the generator's initial output so any silent RNG change is caught.
    #[test]
    fn random_nodes_golden_first_point() {
        let a = random_nodes(300, 1);
        let p = a[0];
        let golden = random_nodes(1, 1)[0];
        assert_eq!(p, golden);
        assert!((p.x - GOLDEN_X).abs() < 1e-15 && (p.y - GOLDEN_Y).abs() < 1e-15);
    }

    // Frozen from the generator's initial output (ChaCha8, seed 1).
    const GOLDEN_X: f64 = 4.02485663664848059e-1;
    const GOLDEN_Y: f64 = 8.03837089297819718e-2;

    #[test]
    fn eval_grid_shapes() {
        let g = eval_grid(2, Rect::UNIT);
        assert_eq!(
            g,
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
                Point2::new(1.0, 1.0)
            ]
        );
        assert_eq!(eval_grid(80, Rect::UNIT).len(), 6400);
        // Row-major and deterministic.
        let g = eval_grid(3, Rect::UNIT);
        assert_eq!(g[1], Point2::new(0.5, 0.0));
        assert_eq!(g[3], Point2::new(0.0, 0.5));
    }
}
