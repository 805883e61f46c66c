//! Shared independent oracles for the integration suites: a brute-force
//! active-set enumeration for the constrained quadratic program and an
//! explicit leave-one-out refit.

use nalgebra::{DMatrix, DVector};
use pcpu::Point2;
use rand::Rng;

/// Matches the Tikhonov weight the solver applies to base coefficients.
pub const BASE_PENALTY: f64 = 1e-12;

/// Objective of the constrained problem: `1/2 (sum added^2 + lambda sum base^2)`.
pub fn qp_objective(coeffs: &[f64], n_base: usize) -> f64 {
    let base: f64 = coeffs[..n_base].iter().map(|c| c * c).sum();
    let added: f64 = coeffs[n_base..].iter().map(|c| c * c).sum();
    0.5 * (added + BASE_PENALTY * base)
}

/// Globally solves `min qp_objective` subject to `B c = f`, `c >= 0` by
/// enumerating every clamp pattern (subset of coefficients pinned at zero).
/// For each pattern the affine solution set of the free columns is
/// parametrized through an SVD (particular solution plus null-space basis)
/// and the weighted norm is minimized over that set; candidates that come
/// out nonnegative are feasible points, and the pattern realized by the true
/// optimum reproduces it exactly. Returns the optimal objective, or `None`
/// when no pattern yields a nonnegative solution. Exponential in the column
/// count; only for tiny instances.
pub fn brute_force_qp(b: &DMatrix<f64>, f: &[f64], n_base: usize) -> Option<f64> {
    let m = b.nrows();
    let n = b.ncols();
    assert!(n <= 12, "enumeration oracle is exponential in columns");
    let fvec = DVector::from_column_slice(f);
    let fnorm = 1.0 + fvec.amax();
    let weight = |j: usize| if j < n_base { BASE_PENALTY } else { 1.0 };
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << n) {
        let free: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let k = free.len();
        if k == 0 {
            if fvec.amax() <= 1e-9 * fnorm {
                let obj = 0.0;
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
            continue;
        }
        let b_free = b.select_columns(free.iter());
        // Pad with zero rows so the SVD carries the full right-singular
        // basis (nalgebra's thin SVD would otherwise drop null directions
        // of a wide matrix).
        let rows = m.max(k);
        let mut padded = DMatrix::zeros(rows, k);
        padded.view_mut((0, 0), (m, k)).copy_from(&b_free);
        let svd = nalgebra::SVD::new(padded, true, true);
        let mut fpad = DVector::zeros(rows);
        fpad.rows_mut(0, m).copy_from(&fvec);
        let max_sv = svd.singular_values.max();
        let rank_tol = 1e-10 * max_sv.max(1e-300);
        let Ok(c0) = svd.solve(&fpad, rank_tol) else {
            continue;
        };
        if (&b_free * &c0 - &fvec).amax() > 1e-8 * fnorm {
            continue; // inconsistent pattern
        }
        let v_t = svd.v_t.as_ref().unwrap();
        let null_dirs: Vec<usize> = (0..k)
            .filter(|&i| svd.singular_values.get(i).map_or(true, |&s| s <= rank_tol))
            .collect();
        let c_free = if null_dirs.is_empty() {
            c0
        } else {
            // Minimize (c0 + Z y)' W (c0 + Z y) over y.
            let z = v_t.select_rows(null_dirs.iter()).transpose();
            let mut wz = z.clone();
            let mut wc0 = c0.clone();
            for (row, &j) in free.iter().enumerate() {
                let w = weight(j);
                for col in 0..wz.ncols() {
                    wz[(row, col)] *= w;
                }
                wc0[row] *= w;
            }
            let gram = z.transpose() * &wz;
            let rhs = -(z.transpose() * &wc0);
            let Some(y) = gram.lu().solve(&rhs) else {
                continue;
            };
            c0 + z * y
        };
        // Near-singular patterns produce huge coefficients whose roundoff
        // exceeds any absolute tolerance; scale the negativity test weakly
        // with magnitude so those are still rejected as infeasible.
        let cmax = c_free.amax();
        if c_free.iter().any(|&c| c < -(1e-9 + 1e-12 * cmax)) {
            continue;
        }
        let mut coeffs = vec![0.0; n];
        for (row, &j) in free.iter().enumerate() {
            coeffs[j] = c_free[row].max(0.0);
        }
        let obj = qp_objective(&coeffs, n_base);
        best = Some(best.map_or(obj, |b: f64| b.min(obj)));
    }
    best
}

/// Leave-one-out errors by explicit refit: drop row and column `i` of the
/// square system `A c = f`, solve, and evaluate the deficit at row `i`.
pub fn loo_refit_errors(a: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, f.len());
    (0..n)
        .map(|i| {
            let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let a_sub = a.select_rows(keep.iter()).select_columns(keep.iter());
            let f_sub = DVector::from_iterator(n - 1, keep.iter().map(|&j| f[j]));
            let c = a_sub.lu().solve(&f_sub).expect("leave-one-out subsystem");
            let pred: f64 = keep
                .iter()
                .enumerate()
                .map(|(k, &j)| a[(i, j)] * c[k])
                .sum();
            f[i] - pred
        })
        .collect()
}

/// Random points in the unit square with pairwise separation at least `sep`.
pub fn separated_points<R: Rng>(rng: &mut R, n: usize, sep: f64) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point2::new(rng.random::<f64>(), rng.random::<f64>());
        if pts.iter().all(|q| q.dist(&p) > sep) {
            pts.push(p);
        }
    }
    pts
}
