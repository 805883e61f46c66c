//! Lawson-Hanson nonnegative least squares and the least-distance program
//! built on it. Problem sizes here are small (the reduced per-patch QPs),
//! so each passive-set least-squares solve just re-runs a dense QR.

use nalgebra::{DMatrix, DVector};

const W_TOL: f64 = 1e-11;

pub enum LdpOutcome {
    /// Minimizer plus the constraint multipliers (the NNLS dual), which
    /// satisfy `w = C' lambda` with `lambda >= 0` at the solution.
    Solved {
        w: DVector<f64>,
        lambda: DVector<f64>,
    },
    Infeasible,
    IterationCap,
}

/// `min_{x >= 0} || A x - b ||`. Returns the solution and the residual norm,
/// or `None` if the iteration cap is exceeded.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Option<(DVector<f64>, f64)> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive: Vec<usize> = Vec::new();
    let mut in_passive = vec![false; n];
    let scale = b.amax().max(1.0);
    // Every least-squares solve rebuilds a QR from scratch, so the real
    // cost driver is their count, inner steps included. A convergent run
    // grows the passive set once per outer iteration with few removals,
    // i.e. on the order of `nrows` solves; degenerate instances that cycle
    // past this budget are abandoned.
    let mut ls_budget = 4 * a.nrows() + 50;
    let mut ls = |passive: &[usize]| -> Option<DVector<f64>> {
        if ls_budget == 0 {
            return None;
        }
        ls_budget -= 1;
        ls_on_passive(a, b, passive)
    };

    for _ in 0..max_iter {
        let resid = b - a * &x;
        let w = a.transpose() * &resid;
        // Most promising zero variable; stop when none has positive gradient.
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !in_passive[j] && w[j] > W_TOL * scale {
                if best.map_or(true, |(_, bw)| w[j] > bw) {
                    best = Some((j, w[j]));
                }
            }
        }
        let Some((j_new, _)) = best else {
            return Some((x, resid.norm()));
        };
        passive.push(j_new);
        in_passive[j_new] = true;

        // Inner loop: keep the passive-set LS solution feasible.
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > max_iter {
                return None;
            }
            let z = ls(&passive)?;
            if z.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &j) in passive.iter().enumerate() {
                    x[j] = z[k];
                }
                break;
            }
            // Step toward z until the first passive variable hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &j) in passive.iter().enumerate() {
                if z[k] <= 0.0 {
                    let a_j = x[j] / (x[j] - z[k]);
                    alpha = alpha.min(a_j);
                }
            }
            for (k, &j) in passive.iter().enumerate() {
                x[j] += alpha * (z[k] - x[j]);
            }
            let eps = 1e-14 * scale;
            let mut k = 0;
            while k < passive.len() {
                let j = passive[k];
                if x[j] <= eps {
                    x[j] = 0.0;
                    in_passive[j] = false;
                    passive.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            if passive.is_empty() {
                break;
            }
        }
    }
    None
}

fn ls_on_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> Option<DVector<f64>> {
    let sub = a.select_columns(passive.iter());
    // Thin-QR least squares (R z = Q' b) is several times cheaper than the
    // SVD; fall back to the SVD when the passive set is rank deficient
    // (non-finite or non-stationary solution) or wider than it is tall.
    if sub.nrows() >= sub.ncols() {
        let qr = sub.clone().qr();
        let qtb = qr.q().transpose() * b;
        if let Some(z) = qr.r().solve_upper_triangular(&qtb) {
            if z.iter().all(|v| v.is_finite()) {
                // Genuine LS solutions are stationary: sub' (b - sub z) ~ 0,
                // to an accuracy that scales with ||sub||^2 ||z|| for the
                // term that cancels and ||sub|| ||b|| for the data term.
                let fro = sub.norm();
                let scale = fro * (fro * z.norm() + b.norm()) + 1.0;
                let grad = sub.transpose() * (b - &sub * &z);
                if grad.amax() <= 1e-9 * scale {
                    return Some(z);
                }
            }
        }
    }
    nalgebra::SVD::new_unordered(sub, true, true)
        .solve(b, 1e-13)
        .ok()
}

/// Least-distance program `min ||w||` subject to `C w >= d`, solved through
/// one NNLS run on the stacked matrix `[C'; d']` (Lawson & Hanson, ch. 23).
/// An (essentially) zero NNLS residual certifies that the constraint set is
/// empty.
pub fn ldp(c: &DMatrix<f64>, d: &DVector<f64>, max_iter: usize) -> LdpOutcome {
    let m = c.nrows();
    let n = c.ncols();
    debug_assert_eq!(m, d.len());
    if m == 0 {
        return LdpOutcome::Solved {
            w: DVector::zeros(n),
            lambda: DVector::zeros(0),
        };
    }
    let mut e = DMatrix::zeros(n + 1, m);
    for j in 0..m {
        for i in 0..n {
            e[(i, j)] = c[(j, i)];
        }
        e[(n, j)] = d[j];
    }
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = 1.0;
    let Some((u, _)) = nnls(&e, &rhs, max_iter) else {
        return LdpOutcome::IterationCap;
    };
    let r = &e * &u - &rhs;
    let denom = r[n];
    // Theory: denom <= 0, with 0 exactly when the constraint set is empty.
    // Near-zero denominators also arise for feasible problems with huge
    // solutions, so reconstruct and verify instead of thresholding alone.
    if denom >= -1e-14 {
        return LdpOutcome::Infeasible;
    }
    let w = DVector::from_fn(n, |i, _| -r[i] / denom);
    let cw = c * &w;
    let scale = 1.0 + d.amax() + cw.amax();
    if (&cw - d).min() < -1e-8 * scale {
        return LdpOutcome::Infeasible;
    }
    let lambda = u / -denom;
    LdpOutcome::Solved { w, lambda }
}
