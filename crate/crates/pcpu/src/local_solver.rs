//! Per-patch solves: plain RBF interpolation, the nonnegativity-constrained
//! minimum-norm re-solve with added compactly supported bumps, and the
//! leave-one-out estimate used to pick the number of added constraints.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{sunflower_points, support_radius};
use crate::kernels::{collocation_matrix, KernelSpec};
use crate::Point2;

mod nnls;

/// Tikhonov weight on the base coefficients in the constrained objective.
/// The added coefficients are penalized with weight 1; this tiny term only
/// selects a unique minimizer when the base part is otherwise free.
const BASE_PENALTY: f64 = 1e-12;

/// Tolerance below which a coefficient counts as clamped at zero.
const COEFF_TOL: f64 = 1e-10;

/// Full constraint-count sweeps are done up to this patch size; larger
/// patches (only the single-patch global baseline in practice) sweep a
/// thinned candidate list that always includes the count equal to the
/// patch size.
const FULL_SWEEP_LIMIT: usize = 30;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("local data points must be nonempty and distinct")]
    BadProblem,
    #[error("near-singular local system (condition estimate {cond:.3e})")]
    NumericalFailure { cond: f64 },
    #[error("singular augmented matrix in leave-one-out estimate")]
    SingularLoocv,
    #[error("no feasible constrained fit found for patch {patch}")]
    PatchInfeasible { patch: usize },
}

/// One patch's interpolation problem.
#[derive(Clone, Debug)]
pub struct LocalProblem {
    pub data_points: Vec<Point2>,
    pub data_values: Vec<f64>,
    pub base_kernel: KernelSpec,
    pub patch_center: Point2,
    pub patch_radius: f64,
}

/// A fitted local expansion: base RBFs at the data sites plus optional
/// added compactly supported bumps, each with its own support radius.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub base_centers: Vec<Point2>,
    pub base_kernel: KernelSpec,
    /// Added constraint points with their support radii `rho` (the bump
    /// kernel is Wendland C2 with shape `1/rho`).
    pub added: Vec<(Point2, f64)>,
    /// Coefficients, base first then added.
    pub coeffs: Vec<f64>,
}

impl LocalModel {
    /// The all-zero model used for patches without data.
    pub fn zero(base_kernel: KernelSpec) -> Self {
        LocalModel {
            base_centers: Vec::new(),
            base_kernel,
            added: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn n_added(&self) -> usize {
        self.added.len()
    }

    pub fn eval(&self, p: &Point2) -> f64 {
        let mut acc = 0.0;
        for (c, center) in self.coeffs.iter().zip(&self.base_centers) {
            acc += c * self.base_kernel.eval_at(center, p);
        }
        for (c, (center, rho)) in self.coeffs[self.base_centers.len()..]
            .iter()
            .zip(&self.added)
        {
            let spec = KernelSpec::wendland_with_support(*rho).expect("rho > 0");
            acc += c * spec.eval_at(center, p);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpStatus {
    Solved,
    Infeasible,
    NumericalFailure,
}

#[derive(Clone, Debug)]
pub struct QpResult {
    pub coeffs: Vec<f64>,
    pub status: QpStatus,
    pub kkt_residual: f64,
}

fn basis_of(problem: &LocalProblem) -> Vec<(Point2, KernelSpec)> {
    problem
        .data_points
        .iter()
        .map(|&p| (p, problem.base_kernel))
        .collect()
}

/// Solves the square local interpolation system `A c = f` by dense LU.
pub fn solve_unconstrained(problem: &LocalProblem) -> Result<Vec<f64>, SolverError> {
    let n = problem.data_points.len();
    if n == 0 || problem.data_values.len() != n {
        return Err(SolverError::BadProblem);
    }
    let a = collocation_matrix(&problem.data_points, &basis_of(problem))
        .map_err(|_| SolverError::BadProblem)?;
    let f = DVector::from_column_slice(&problem.data_values);
    let lu = a.clone().lu();
    let mut c = lu.solve(&f).ok_or(SolverError::NumericalFailure {
        cond: f64::INFINITY,
    })?;
    let fmax = f.amax();
    let tol = 1e-8 * (1.0 + fmax);
    let mut resid = (&a * &c - &f).amax();
    // Nearly flat kernels on small patches make the local system
    // numerically singular; the LU residual floor is then around
    // u * cond * |f| and can exceed `tol`. A truncated SVD solve reaches
    // the same residual floor with far smaller coefficients, which
    // evaluates more stably away from the data, so prefer it when LU
    // misses the tolerance. Accept a residual up to 100x the target with a
    // warning; interpolation accuracy degrades to the numerical floor
    // there, consistent with the conditioning of the problem.
    if !(resid.is_finite() && resid <= tol) {
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        if let Ok(cs) = svd.solve(&f, 1e-13 * smax) {
            let resid_svd = (&a * &cs - &f).amax();
            if resid_svd.is_finite() && (!resid.is_finite() || resid_svd < resid) {
                c = cs;
                resid = resid_svd;
            }
        }
    }
    if !resid.is_finite() || resid > 100.0 * tol {
        let diag: Vec<f64> = (0..n).map(|i| lu.u()[(i, i)].abs()).collect();
        let cond = diag.iter().cloned().fold(0.0, f64::max)
            / diag.iter().cloned().fold(f64::INFINITY, f64::min);
        return Err(SolverError::NumericalFailure { cond });
    }
    if resid > tol {
        log::warn!(
            "ill-conditioned local system: interpolation residual {resid:.3e} \
             exceeds the {tol:.3e} target"
        );
    }
    Ok(c.as_slice().to_vec())
}

/// True iff the model is `>= -tol` at every check point.
pub fn check_nonnegativity(model: &LocalModel, check_points: &[Point2], tol: f64) -> bool {
    check_points.iter().all(|p| model.eval(p) >= -tol)
}

/// Minimizes `sum_{i > n_base} c_i^2 + lambda * sum_{i <= n_base} c_i^2`
/// subject to `B c = f` and `c >= 0`.
///
/// The equality constraints are eliminated through the leading square block
/// of `B` (the unconstrained collocation matrix), which reduces the problem
/// to a least-distance program in the added coefficients alone; that is
/// solved by an active-set NNLS iteration. Equality therefore holds to
/// factorization accuracy by construction.
pub fn solve_positive_qp(b: &DMatrix<f64>, f: &[f64], n_base: usize) -> QpResult {
    let m = b.nrows();
    let n = b.ncols();
    assert_eq!(m, f.len());
    assert!(n_base <= n && m <= n);
    // Work with f normalized to unit max so the reduced program and its
    // tolerances are scale-free; coefficients are rescaled on the way out.
    let fscale = f.iter().cloned().fold(0.0_f64, |a, v| a.max(v.abs()));
    if fscale == 0.0 {
        return QpResult {
            coeffs: vec![0.0; n],
            status: QpStatus::Solved,
            kkt_residual: 0.0,
        };
    }
    let fvec = DVector::from_column_slice(f) / fscale;
    let fail = |coeffs: Vec<f64>| QpResult {
        coeffs,
        status: QpStatus::NumericalFailure,
        kkt_residual: f64::INFINITY,
    };

    // Leading m x m block; invertible for distinct points with a strictly
    // positive definite base kernel.
    let a = b.columns(0, m).into_owned();
    let lu = a.clone().lu();
    let c_unc = match lu.solve(&fvec) {
        Some(c) => c,
        None => return fail(vec![0.0; n]),
    };

    if n == m {
        // No added columns: the square solve is the only candidate.
        let min_c = c_unc.min();
        let status = if !min_c.is_finite() {
            QpStatus::NumericalFailure
        } else if min_c >= -COEFF_TOL {
            QpStatus::Solved
        } else {
            QpStatus::Infeasible
        };
        return QpResult {
            coeffs: c_unc.iter().map(|c| c * fscale).collect(),
            status,
            kkt_residual: 0.0,
        };
    }

    let n_hat = n - m;
    let g = match lu.solve(&b.columns(m, n_hat).into_owned()) {
        Some(g) => g,
        None => return fail(vec![0.0; n]),
    };

    // Reduced problem in t = added coefficients:
    //   min 1/2 t' H t + q' t,  H = I + lambda G'G,  q = -lambda G' c_unc,
    //   s.t. t >= 0 and G t <= c_unc.
    let h = DMatrix::identity(n_hat, n_hat) + g.transpose() * &g * BASE_PENALTY;
    let q = -(g.transpose() * &c_unc) * BASE_PENALTY;
    let chol = match nalgebra::Cholesky::new(h) {
        Some(c) => c,
        None => return fail(vec![0.0; n]),
    };

    // Shift to a pure least-distance program: with z = L't + L^-1 q the
    // objective is 1/2 ||z||^2 + const.
    let l_inv_q = chol.l().solve_lower_triangular(&q).expect("triangular");
    // Constraints C t >= d with rows [I; -G], d = [0; -c_unc]; in z:
    //   (C L^-T) z >= d + C H^-1 q.
    let mut cmat = DMatrix::zeros(n_hat + m, n_hat);
    let mut d = DVector::zeros(n_hat + m);
    for i in 0..n_hat {
        cmat[(i, i)] = 1.0;
    }
    for i in 0..m {
        for k in 0..n_hat {
            cmat[(n_hat + i, k)] = -g[(i, k)];
        }
        d[n_hat + i] = -c_unc[i];
    }
    let h_inv_q = chol.solve(&q);
    let d_shift = &d + &cmat * &h_inv_q;
    // C L^-T: solve L X' = C' then transpose.
    let c_lt = chol
        .l()
        .solve_lower_triangular(&cmat.transpose())
        .expect("triangular")
        .transpose();

    // The LDP's stacked matrix has n_hat + 1 rows, so no more than
    // n_hat + 1 constraints can be usefully active; convergent runs need
    // on that order of iterations. Capping relative to n_hat (not the full
    // constraint count) stops degenerate instances from grinding through
    // hundreds of thousands of cycling steps before failing.
    let max_iter = 30 * (n_hat + 2);
    let (w, lambda) = match nnls::ldp(&c_lt, &d_shift, max_iter) {
        nnls::LdpOutcome::Solved { w, lambda } => (w, lambda),
        nnls::LdpOutcome::Infeasible => {
            return QpResult {
                coeffs: vec![0.0; n],
                status: QpStatus::Infeasible,
                kkt_residual: f64::INFINITY,
            }
        }
        nnls::LdpOutcome::IterationCap => { log::debug!("qp ldp iteration cap (n_hat={n_hat})"); return fail(vec![0.0; n]); }
    };

    // Back-substitute: t = L^-T (w - L^-1 q), clamp roundoff negatives.
    let z = w - l_inv_q;
    let mut t = chol
        .l()
        .transpose()
        .solve_upper_triangular(&z)
        .expect("triangular");
    let t_scale = 1.0 + t.amax();
    for ti in t.iter_mut() {
        if *ti < 0.0 && *ti > -COEFF_TOL * t_scale {
            *ti = 0.0;
        }
    }
    let c_base = &c_unc - &g * &t;
    let mut coeffs = Vec::with_capacity(n);
    coeffs.extend_from_slice(c_base.as_slice());
    coeffs.extend_from_slice(t.as_slice());

    // Recover the multipliers of the original problem from the LDP dual.
    // The reduced constraint rows are ordered [t >= 0; c_base >= 0], so the
    // bound multipliers are s = (lambda_base, lambda_t) in coefficient
    // order, and the equality multiplier mu solves the base-row
    // stationarity A' mu = lambda_pen * c_base - s_base exactly.
    let s_t = lambda.rows(0, n_hat).into_owned();
    let s_b = lambda.rows(n_hat, m).into_owned();
    let mu = match a.transpose().lu().solve(&(&c_base * BASE_PENALTY - &s_b)) {
        Some(mu) => mu,
        None => return fail(vec![0.0; n]),
    };
    let mut s = DVector::zeros(n);
    s.rows_mut(0, m).copy_from(&s_b);
    s.rows_mut(m, n_hat).copy_from(&s_t);

    let (status, kkt) = verify_kkt(b, &fvec, &coeffs, n_base, &mu, &s);
    for c in coeffs.iter_mut() {
        *c *= fscale;
    }
    QpResult {
        coeffs,
        status,
        kkt_residual: kkt,
    }
}

/// Verifies the KKT conditions at a proposed primal/dual pair: primal
/// feasibility, stationarity `D c = B' mu + s`, and complementary
/// slackness. Dual feasibility (`s >= 0`) holds by construction since the
/// multipliers come from an NNLS vector. Residuals are normalized by the
/// size of the terms involved, since near-degenerate constraint columns
/// force huge coefficients whose achievable absolute accuracy scales with
/// them.
fn verify_kkt(
    b: &DMatrix<f64>,
    f: &DVector<f64>,
    coeffs: &[f64],
    n_base: usize,
    mu: &DVector<f64>,
    s: &DVector<f64>,
) -> (QpStatus, f64) {
    let n = coeffs.len();
    let c = DVector::from_column_slice(coeffs);
    let min_c = c.min();
    let max_c = c.amax();
    let eq_resid = (b * &c - f).amax();
    if !eq_resid.is_finite()
        || eq_resid > 1e-8 * (1.0 + f.amax())
        || min_c < -COEFF_TOL * (1.0 + max_c)
    {
        return (QpStatus::NumericalFailure, f64::INFINITY);
    }
    let dc = DVector::from_fn(n, |i, _| {
        let w = if i < n_base { BASE_PENALTY } else { 1.0 };
        w * coeffs[i]
    });
    let bmu = b.transpose() * mu;
    let stat_scale = 1.0 + dc.amax() + bmu.amax() + s.amax();
    let slack_scale = (1.0 + max_c) * (1.0 + s.amax());
    let mut kkt = eq_resid / (1.0 + f.amax());
    for i in 0..n {
        kkt = kkt.max((dc[i] - bmu[i] - s[i]).abs() / stat_scale);
        kkt = kkt.max((coeffs[i] * s[i]).abs() / slack_scale);
    }
    if kkt <= 1e-6 {
        (QpStatus::Solved, kkt)
    } else {
        (QpStatus::NumericalFailure, kkt)
    }
}

/// Rippa-style leave-one-out estimates `e_i = c_i / (A^-1)_ii` for the
/// augmented square matrix, plus their max-abs norm.
pub fn loocv_errors(coeffs: &[f64], a_hat: &DMatrix<f64>) -> Result<(Vec<f64>, f64), SolverError> {
    let n = a_hat.nrows();
    assert_eq!(n, a_hat.ncols());
    assert_eq!(n, coeffs.len());
    let inv = a_hat
        .clone()
        .try_inverse()
        .ok_or(SolverError::SingularLoocv)?;
    let mut errs = Vec::with_capacity(n);
    let mut norm: f64 = 0.0;
    for i in 0..n {
        let d = inv[(i, i)];
        if !d.is_finite() || d.abs() < 1e-14 {
            return Err(SolverError::SingularLoocv);
        }
        let e = coeffs[i] / d;
        norm = norm.max(e.abs());
        errs.push(e);
    }
    if !norm.is_finite() {
        return Err(SolverError::SingularLoocv);
    }
    Ok((errs, norm))
}

/// Builds the augmented square matrix (data rows then added rows; base
/// columns then added bump columns) for a candidate constraint set.
fn augmented_matrix(
    problem: &LocalProblem,
    added: &[(Point2, f64)],
) -> Result<DMatrix<f64>, SolverError> {
    let mut rows: Vec<Point2> = problem.data_points.clone();
    rows.extend(added.iter().map(|(p, _)| *p));
    let mut basis = basis_of(problem);
    for (p, rho) in added {
        basis.push((
            *p,
            KernelSpec::wendland_with_support(*rho).map_err(|_| SolverError::BadProblem)?,
        ));
    }
    collocation_matrix(&rows, &basis).map_err(|_| SolverError::BadProblem)
}

fn candidate_counts(n: usize) -> Vec<usize> {
    if n <= FULL_SWEEP_LIMIT {
        return (1..=n).collect();
    }
    // Thinned sweep: dense early counts, then powers of two. Counts past
    // 256 are excluded outright — one QP there costs minutes (the NNLS
    // rebuilds a QR per active-set change) and the data-site fallback
    // already guarantees a feasible model when every candidate fails, so
    // huge counts buy nothing but runtime.
    let mut out: Vec<usize> = (1..=16).collect();
    let mut k = 32usize;
    while k < n && k <= 256 {
        out.push(k);
        k *= 2;
    }
    if n <= 512 && *out.last().unwrap() != n {
        out.push(n);
    }
    out
}

/// Result of one candidate constraint count in the selection sweep.
struct Candidate {
    n_hat: usize,
    loocv_norm: f64,
    model: LocalModel,
}

/// Fits one patch: plain interpolation if it stays nonnegative on the check
/// points, otherwise a sweep over added constraint counts picking the one
/// with the smallest leave-one-out estimate (ties to fewer constraints).
/// If no sweep candidate is feasible, falls back to bumps centered at the
/// data sites, which always admit a nonnegative interpolant when the data
/// values are nonnegative.
pub fn fit_local_positive(
    problem: &LocalProblem,
    check_points: &[Point2],
) -> Result<LocalModel, SolverError> {
    let coeffs = match solve_unconstrained(problem) {
        Ok(c) => c,
        Err(e) => {
            // A positive-mode fit must still deliver a nonnegative
            // interpolant even when the plain system is numerically
            // intractable (single huge ill-conditioned patches); the
            // fallback construction does not need the plain solve.
            log::warn!("plain local solve failed ({e}); using the guaranteed fallback");
            return data_site_fallback(problem);
        }
    };
    let unconstrained = LocalModel {
        base_centers: problem.data_points.clone(),
        base_kernel: problem.base_kernel,
        added: Vec::new(),
        coeffs,
    };
    if check_nonnegativity(&unconstrained, check_points, COEFF_TOL) {
        return Ok(unconstrained);
    }

    let n = problem.data_points.len();
    let best = candidate_counts(n)
        .into_par_iter()
        .filter_map(|n_hat| try_candidate(problem, check_points, n_hat))
        .min_by(|a, b| {
            a.loocv_norm
                .total_cmp(&b.loocv_norm)
                .then(a.n_hat.cmp(&b.n_hat))
        });
    match best {
        Some(c) => Ok(c.model),
        None => data_site_fallback(problem),
    }
}

/// Last resort when every sunflower candidate fails (the spiral points do
/// not always give each data site its own isolating bump, so even the
/// largest candidate count can be infeasible). The model is built directly
/// instead of through a QP:
///
/// 1. A dense grid of overlapping Wendland bumps (spacing `delta/10`,
///    support twice the spacing, extending one support past the rim)
///    carries a normalized quasi-interpolation of the clipped unconstrained
///    fit, so the model tracks the accurate plain fit between sites with
///    nonnegative coefficients.
/// 2. The quasi-interpolant is lowered by a uniform margin until it
///    nowhere exceeds a data value, so the remaining interpolation
///    residual is nonnegative at every site.
/// 3. One narrow bump per data site (support half the nearest-site
///    distance, hence zero at every other site) absorbs that residual
///    exactly.
///
/// All coefficients are nonnegative by construction and the interpolation
/// conditions hold exactly; if the unconstrained solve itself fails, the
/// quasi-interpolation layer is dropped and the site bumps carry `f`
/// alone (exact but spiky — the unconditional last resort).
fn data_site_fallback(problem: &LocalProblem) -> Result<LocalModel, SolverError> {
    if problem.data_values.iter().any(|&v| v < 0.0) {
        return Err(SolverError::PatchInfeasible { patch: 0 });
    }
    let pts = &problem.data_points;
    let n = pts.len();
    let spikes: Vec<(Point2, f64)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let nearest = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.dist(p))
                .fold(f64::INFINITY, f64::min);
            let rho = if nearest.is_finite() {
                0.5 * nearest
            } else {
                problem.patch_radius
            };
            (*p, rho)
        })
        .collect();
    if spikes.iter().any(|&(_, rho)| !(rho > 0.0)) {
        return Err(SolverError::BadProblem);
    }

    let quasi = quasi_interp_layer(problem);
    let (mut added, mut coeffs, m0) = match quasi {
        Some((bumps, c, m0)) => (bumps, c, m0),
        None => (Vec::new(), Vec::new(), vec![0.0; n]),
    };
    for (i, (p, rho)) in spikes.into_iter().enumerate() {
        let psi0 = KernelSpec::wendland_with_support(rho)
            .map_err(|_| SolverError::BadProblem)?
            .eval(0.0);
        added.push((p, rho));
        coeffs.push((problem.data_values[i] - m0[i]).max(0.0) / psi0);
    }
    let mut all = vec![0.0; n];
    all.extend(coeffs);
    log::debug!("no sunflower candidate feasible for a {n}-point patch; using the quasi-interpolation fallback");
    Ok(LocalModel {
        base_centers: pts.clone(),
        base_kernel: problem.base_kernel,
        added,
        coeffs: all,
    })
}

/// Builds the smooth nonnegative layer of the fallback model: bump centers,
/// their coefficients, and the layer's values at the data sites. Returns
/// `None` when the unconstrained fit is unavailable or the margin loop
/// cannot push the layer below the data within its iteration budget.
#[allow(clippy::type_complexity)]
fn quasi_interp_layer(problem: &LocalProblem) -> Option<(Vec<(Point2, f64)>, Vec<f64>, Vec<f64>)> {
    let plain = match solve_unconstrained(problem) {
        Ok(p) => p,
        Err(e) => {
            log::debug!("quasi layer: unconstrained solve failed: {e}");
            return None;
        }
    };
    let u = LocalModel {
        base_centers: problem.data_points.clone(),
        base_kernel: problem.base_kernel,
        added: Vec::new(),
        coeffs: plain,
    };
    let center = problem.patch_center;
    let delta = problem.patch_radius;
    let h = delta / 10.0;
    let rho = 2.0 * h;
    let bump = KernelSpec::wendland_with_support(rho).ok()?;
    let reach = delta + rho;
    let k = (reach / h).ceil() as i64 + 1;
    let mut centers = Vec::new();
    for iy in -k..=k {
        for ix in -k..=k {
            let y = Point2::new(center.x + ix as f64 * h, center.y + iy as f64 * h);
            if y.dist(&center) <= reach {
                centers.push(y);
            }
        }
    }
    // Clipped plain-fit samples and the normalization sums.
    let uy: Vec<f64> = centers.iter().map(|y| u.eval(y).max(0.0)).collect();
    let nu: Vec<f64> = centers
        .iter()
        .map(|y| centers.iter().map(|z| bump.eval(y.dist(z))).sum::<f64>())
        .collect();
    if nu.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let f = &problem.data_values;
    let n = f.len();
    let site_layer = |c: &[f64]| -> Vec<f64> {
        problem
            .data_points
            .iter()
            .map(|x| {
                centers
                    .iter()
                    .zip(c)
                    .map(|(y, ck)| ck * bump.eval(x.dist(y)))
                    .sum::<f64>()
            })
            .collect()
    };
    // The layer's value at each site decreases monotonically in the
    // margin, and at `margin = max(uy)` every coefficient clips to zero,
    // so the smallest feasible margin is found by bisection.
    let coeffs_for = |margin: f64| -> Vec<f64> {
        uy.iter()
            .zip(&nu)
            .map(|(v, nv)| (v - margin).max(0.0) / nv)
            .collect()
    };
    let feasible = |m0: &[f64]| (0..n).all(|i| m0[i] <= f[i]);
    let mut lo = 0.0_f64;
    let mut hi = uy.iter().cloned().fold(0.0_f64, f64::max);
    let c0 = coeffs_for(lo);
    let m00 = site_layer(&c0);
    if feasible(&m00) {
        let added = centers.into_iter().map(|y| (y, rho)).collect();
        return Some((added, c0, m00));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let c = coeffs_for(mid);
        if feasible(&site_layer(&c)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let c = coeffs_for(hi);
    let m0 = site_layer(&c);
    if !feasible(&m0) {
        log::debug!("quasi layer: no feasible margin (hi {hi:.3e})");
        return None;
    }
    let added = centers.into_iter().map(|y| (y, rho)).collect();
    Some((added, c, m0))
}

fn try_candidate(
    problem: &LocalProblem,
    check_points: &[Point2],
    n_hat: usize,
) -> Option<Candidate> {
    let pts = sunflower_points(problem.patch_center, problem.patch_radius, n_hat);
    let added: Vec<(Point2, f64)> = pts
        .into_iter()
        .map(|p| {
            let rho = support_radius(&p, &problem.data_points, problem.patch_radius);
            (p, rho)
        })
        .collect();
    let a_hat = augmented_matrix(problem, &added).ok()?;
    let n = problem.data_points.len();
    let b = a_hat.rows(0, n).into_owned();
    let qp = solve_positive_qp(&b, &problem.data_values, n);
    if qp.status != QpStatus::Solved {
        return None;
    }
    let model = LocalModel {
        base_centers: problem.data_points.clone(),
        base_kernel: problem.base_kernel,
        added,
        coeffs: qp.coeffs,
    };
    // Redundant with all-nonnegative coefficients, kept as a guard.
    if !check_nonnegativity(&model, check_points, COEFF_TOL) {
        return None;
    }
    let (_, norm) = loocv_errors(&model.coeffs, &a_hat).ok()?;
    Some(Candidate {
        n_hat,
        loocv_norm: norm,
        model,
    })
}
