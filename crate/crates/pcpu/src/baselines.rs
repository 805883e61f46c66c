//! Comparison baselines: the classical Shepard approximant and the
//! single-patch (global) constrained fit.

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::Rect;
use crate::kernels::KernelSpec;
use crate::pu::{self, PuConfig, PuError, PuMode, PuModel};
use crate::Point2;

/// Largest data set accepted by the dense single-patch global solve.
pub const GLOBAL_FIT_MAX_POINTS: usize = 4000;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("global constrained fit limited to {GLOBAL_FIT_MAX_POINTS} points, got {0}")]
    TooManyPoints(usize),
    #[error(transparent)]
    Pu(#[from] PuError),
}

/// Classical Shepard inverse-distance interpolant
/// `S(x) = sum_i f_i r_i^-p / sum_i r_i^-p`, with an exact branch at data
/// sites. Output always lies within the range of the data.
pub fn shepard_eval(
    data_points: &[Point2],
    data_values: &[f64],
    query_points: &[Point2],
    power: f64,
) -> Vec<f64> {
    assert!(!data_points.is_empty() && data_points.len() == data_values.len());
    assert!(power > 0.0);
    query_points
        .par_iter()
        .map(|q| {
            let mut num = 0.0;
            let mut den = 0.0;
            for (p, &f) in data_points.iter().zip(data_values) {
                let r = q.dist(p);
                if r == 0.0 {
                    return f;
                }
                let w = r.powf(-power);
                num += f * w;
                den += w;
            }
            num / den
        })
        .collect()
}

/// Single-patch constrained fit: the whole data set is treated as one patch
/// so any added constraints reshape the surface globally. Built through the
/// same machinery as the patched fit with a forced patch count of one.
pub fn global_constrained_fit(
    data_points: &[Point2],
    data_values: &[f64],
    kernel: KernelSpec,
    domain: Rect,
) -> Result<PuModel, BaselineError> {
    global_constrained_fit_with_eval(data_points, data_values, &[], kernel, domain)
}

/// [`global_constrained_fit`] with known evaluation points folded into the
/// negativity check set, mirroring [`pu::fit_with_eval`]. Without them the
/// single patch's fixed check grid can miss narrow negative dips.
pub fn global_constrained_fit_with_eval(
    data_points: &[Point2],
    data_values: &[f64],
    eval_points: &[Point2],
    kernel: KernelSpec,
    domain: Rect,
) -> Result<PuModel, BaselineError> {
    if data_points.len() > GLOBAL_FIT_MAX_POINTS {
        return Err(BaselineError::TooManyPoints(data_points.len()));
    }
    let config = PuConfig {
        kernel,
        mode: PuMode::Positive,
        domain,
        d_override: Some(1),
    };
    Ok(pu::fit_with_eval(data_points, data_values, eval_points, config)?)
}
