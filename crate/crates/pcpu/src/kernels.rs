//! Radial basis functions and collocation matrices.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::Point2;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("shape parameter must be positive and finite, got {0}")]
    BadShape(f64),
    #[error("kernel argument must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("collocation matrix needs nonempty points and basis")]
    EmptyInput,
}

/// Kernel family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KernelFamily {
    /// Wendland's C2 function `(1 - eps*r)_+^4 (4*eps*r + 1)`; compactly
    /// supported with support radius `1/eps`.
    WendlandC2,
    /// Inverse multiquadric `1 / sqrt(1 + eps^2 r^2)`; globally supported.
    Imq,
}

/// One radial basis function: a family plus its shape parameter.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub shape: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, shape: f64) -> Result<Self, KernelError> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(KernelError::BadShape(shape));
        }
        Ok(KernelSpec { family, shape })
    }

    /// Wendland C2 kernel whose support radius is exactly `radius`.
    pub fn wendland_with_support(radius: f64) -> Result<Self, KernelError> {
        Self::new(KernelFamily::WendlandC2, 1.0 / radius)
    }

    /// Evaluates the kernel at radius `r >= 0`. Values lie in `[0, 1]` with
    /// `eval(0) == 1` for both families.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        let s = self.shape * r;
        match self.family {
            KernelFamily::WendlandC2 => {
                let t = 1.0 - s;
                if t <= 0.0 {
                    0.0
                } else {
                    let t2 = t * t;
                    t2 * t2 * (4.0 * s + 1.0)
                }
            }
            KernelFamily::Imq => 1.0 / (1.0 + s * s).sqrt(),
        }
    }

    /// Like [`eval`](Self::eval) but rejects negative radii.
    pub fn eval_checked(&self, r: f64) -> Result<f64, KernelError> {
        if r < 0.0 {
            return Err(KernelError::NegativeRadius(r));
        }
        Ok(self.eval(r))
    }

    /// Evaluates the kernel centred at `center` at the point `p`.
    pub fn eval_at(&self, center: &Point2, p: &Point2) -> f64 {
        self.eval(center.dist(p))
    }
}

/// Builds the dense collocation matrix with entry `(i, k)` equal to basis
/// function `k` evaluated at point `i`. With a single kernel spec and
/// `points == centers` the result is symmetric; with mixed kernels it is a
/// plain (generally nonsymmetric) evaluation matrix.
pub fn collocation_matrix(
    points: &[Point2],
    basis: &[(Point2, KernelSpec)],
) -> Result<DMatrix<f64>, KernelError> {
    if points.is_empty() || basis.is_empty() {
        return Err(KernelError::EmptyInput);
    }
    Ok(DMatrix::from_fn(points.len(), basis.len(), |i, k| {
        basis[k].1.eval_at(&basis[k].0, &points[i])
    }))
}
