//! Partition-of-unity weights, the full positive-constrained fit across
//! patches, and evaluation of the blended interpolant.

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{assign_to_patches, GeometryError, PatchGrid, Rect};
use crate::kernels::KernelSpec;
use crate::local_solver::{
    check_nonnegativity, fit_local_positive, solve_unconstrained, LocalModel, LocalProblem,
    SolverError,
};
use crate::Point2;

#[derive(Debug, Error)]
pub enum PuError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("patch {patch}: {source}")]
    Patch {
        patch: usize,
        source: SolverError,
    },
    #[error("point ({x}, {y}) is not covered by any patch")]
    Uncovered { x: f64, y: f64 },
    #[error("data points and values must be nonempty and equal length")]
    BadInput,
}

/// Fit mode: plain interpolation or the positivity-constrained variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PuMode {
    Plain,
    Positive,
}

#[derive(Clone, Copy, Debug)]
pub struct PuConfig {
    pub kernel: KernelSpec,
    pub mode: PuMode,
    pub domain: Rect,
    /// Explicit patch count (must be a perfect square); defaults to
    /// `floor(sqrt(N)/2)^2` when unset.
    pub d_override: Option<usize>,
}

impl PuConfig {
    pub fn new(kernel: KernelSpec, mode: PuMode) -> Self {
        PuConfig {
            kernel,
            mode,
            domain: Rect::UNIT,
            d_override: None,
        }
    }
}

/// A fitted partition-of-unity model: one local expansion per patch.
#[derive(Clone, Debug)]
pub struct PuModel {
    pub grid: PatchGrid,
    pub locals: Vec<LocalModel>,
    pub config: PuConfig,
}

/// Shepard-normalized weights of the patches covering `point`: Wendland C2
/// bumps scaled so each weight's support is exactly its patch, normalized
/// to sum to one. Returned sparse as `(patch index, weight)` pairs in
/// ascending patch order.
pub fn pu_weights(point: &Point2, grid: &PatchGrid) -> Result<Vec<(usize, f64)>, PuError> {
    let bump = KernelSpec::wendland_with_support(grid.delta).expect("delta > 0");
    let mut pairs: Vec<(usize, f64)> = grid
        .covering(point)
        .into_iter()
        .map(|j| (j, bump.eval(grid.centers[j].dist(point))))
        .collect();
    let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
    if !(total > 0.0) {
        return Err(PuError::Uncovered {
            x: point.x,
            y: point.y,
        });
    }
    for (_, w) in &mut pairs {
        *w /= total;
    }
    Ok(pairs)
}

/// 20x20 grid over the patch's bounding square, clipped to the disk; used
/// as the dense part of the local negativity check set.
fn patch_check_grid(center: Point2, radius: f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(400);
    for iy in 0..20 {
        for ix in 0..20 {
            let p = Point2::new(
                center.x - radius + 2.0 * radius * ix as f64 / 19.0,
                center.y - radius + 2.0 * radius * iy as f64 / 19.0,
            );
            if p.dist(&center) <= radius {
                out.push(p);
            }
        }
    }
    out
}

/// Fits the model to scattered data. Equivalent to
/// [`fit_with_eval`] with an empty evaluation set.
pub fn fit(points: &[Point2], values: &[f64], config: PuConfig) -> Result<PuModel, PuError> {
    fit_with_eval(points, values, &[], config)
}

/// Fits the model; `eval_points` (if known up front) are folded into each
/// patch's negativity check set alongside the fixed per-patch grid.
pub fn fit_with_eval(
    points: &[Point2],
    values: &[f64],
    eval_points: &[Point2],
    config: PuConfig,
) -> Result<PuModel, PuError> {
    if points.is_empty() || points.len() != values.len() {
        return Err(PuError::BadInput);
    }
    if config.mode == PuMode::Positive && values.iter().any(|&v| v < 0.0) {
        log::warn!("positive-constrained fit requested on data with negative values");
    }
    let grid = match config.d_override {
        Some(d) => PatchGrid::with_patch_count(d, config.domain)?,
        None => PatchGrid::from_data_count(points.len(), config.domain)?,
    };
    let data_lists = assign_to_patches(points, &grid)?;
    let eval_lists = if eval_points.is_empty() {
        vec![Vec::new(); grid.d()]
    } else {
        assign_to_patches(eval_points, &grid)?
    };

    let locals: Vec<Result<LocalModel, PuError>> = (0..grid.d())
        .into_par_iter()
        .map(|j| {
            let idx = &data_lists[j];
            if idx.is_empty() {
                if !eval_lists[j].is_empty() {
                    log::warn!("patch {j} has evaluation points but no data; using zero model");
                }
                return Ok(LocalModel::zero(config.kernel));
            }
            let problem = LocalProblem {
                data_points: idx.iter().map(|&i| points[i]).collect(),
                data_values: idx.iter().map(|&i| values[i]).collect(),
                base_kernel: config.kernel,
                patch_center: grid.centers[j],
                patch_radius: grid.delta,
            };
            match config.mode {
                PuMode::Plain => solve_unconstrained(&problem)
                    .map(|coeffs| LocalModel {
                        base_centers: problem.data_points.clone(),
                        base_kernel: config.kernel,
                        added: Vec::new(),
                        coeffs,
                    })
                    .map_err(|source| PuError::Patch { patch: j, source }),
                PuMode::Positive => {
                    let mut checks = patch_check_grid(grid.centers[j], grid.delta);
                    checks.extend(eval_lists[j].iter().map(|&i| eval_points[i]));
                    fit_local_positive(&problem, &checks).map_err(|source| PuError::Patch {
                        patch: j,
                        source: match source {
                            SolverError::PatchInfeasible { .. } => {
                                SolverError::PatchInfeasible { patch: j }
                            }
                            other => other,
                        },
                    })
                }
            }
        })
        .collect();

    let locals = locals.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(PuModel {
        grid,
        locals,
        config,
    })
}

impl PuModel {
    /// Evaluates the blended interpolant at one point. Contributions are
    /// accumulated in ascending patch-index order for determinism.
    pub fn evaluate_one(&self, p: &Point2) -> Result<f64, PuError> {
        let weights = pu_weights(p, &self.grid)?;
        Ok(weights
            .into_iter()
            .map(|(j, w)| w * self.locals[j].eval(p))
            .sum())
    }

    pub fn evaluate(&self, points: &[Point2]) -> Result<Vec<f64>, PuError> {
        points
            .par_iter()
            .map(|p| self.evaluate_one(p))
            .collect::<Result<Vec<_>, _>>()
    }

    /// Number of added constraint points per patch.
    pub fn constraints_per_patch(&self) -> Vec<usize> {
        self.locals.iter().map(|l| l.n_added()).collect()
    }

    /// True if every local model is nonnegative on its patch check grid.
    pub fn locally_nonnegative(&self, tol: f64) -> bool {
        self.locals.iter().enumerate().all(|(j, l)| {
            let checks = patch_check_grid(self.grid.centers[j], self.grid.delta);
            check_nonnegativity(l, &checks, tol)
        })
    }
}
