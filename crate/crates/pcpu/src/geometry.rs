//! Circular-patch covering of the domain, point-to-patch assignment via a
//! cell grid, and sunflower-spiral constraint point generation.

use std::collections::HashMap;

use thiserror::Error;

use crate::Point2;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("need at least 4 data points to build a patch grid, got {0}")]
    TooFewPoints(usize),
    #[error("patch count {0} must be a positive perfect square")]
    NotPerfectSquare(usize),
    #[error("point {index} at ({x}, {y}) lies outside the domain")]
    PointOutsideDomain { index: usize, x: f64, y: f64 },
    #[error("degenerate domain rectangle")]
    DegenerateDomain,
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect {
        x0: 0.0,
        y0: 0.0,
        x1: 1.0,
        y1: 1.0,
    };

    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        if !(x1 > x0 && y1 > y0) {
            return Err(GeometryError::DegenerateDomain);
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
}

/// Uniform `m x m` layout of circular patches covering a rectangle.
///
/// Patch `j = iy * m + ix` is the closed disk of radius `delta` centred at
/// the midpoint of grid cell `(ix, iy)`. The radius is `side / m` where
/// `side` is the longer rectangle side, so the disks cover the domain.
#[derive(Clone, Debug)]
pub struct PatchGrid {
    pub domain: Rect,
    pub m: usize,
    pub delta: f64,
    pub centers: Vec<Point2>,
}

impl PatchGrid {
    /// Grid sized from the data count: `m = floor(sqrt(n) / 2)`, so the
    /// patch count `d = m^2` keeps roughly four data points per patch.
    pub fn from_data_count(n: usize, domain: Rect) -> Result<Self, GeometryError> {
        let m = ((n as f64).sqrt() / 2.0).floor() as usize;
        if m == 0 {
            return Err(GeometryError::TooFewPoints(n));
        }
        Ok(Self::with_side(m, domain))
    }

    /// Grid with an explicit patch count, which must be a perfect square.
    pub fn with_patch_count(d: usize, domain: Rect) -> Result<Self, GeometryError> {
        let m = (d as f64).sqrt().round() as usize;
        if m == 0 || m * m != d {
            return Err(GeometryError::NotPerfectSquare(d));
        }
        Ok(Self::with_side(m, domain))
    }

    fn with_side(m: usize, domain: Rect) -> Self {
        let delta = domain.width().max(domain.height()) / m as f64;
        let mut centers = Vec::with_capacity(m * m);
        for iy in 0..m {
            for ix in 0..m {
                centers.push(Point2::new(
                    domain.x0 + (ix as f64 + 0.5) * domain.width() / m as f64,
                    domain.y0 + (iy as f64 + 0.5) * domain.height() / m as f64,
                ));
            }
        }
        PatchGrid {
            domain,
            m,
            delta,
            centers,
        }
    }

    /// Number of patches.
    pub fn d(&self) -> usize {
        self.centers.len()
    }

    /// Indices of the patches whose closed disk contains `p`, ascending.
    /// Exploits the uniform center layout to test only nearby candidates.
    pub fn covering(&self, p: &Point2) -> Vec<usize> {
        let m = self.m;
        let sx = self.domain.width() / m as f64;
        let sy = self.domain.height() / m as f64;
        let ix_lo = (((p.x - self.delta - self.domain.x0) / sx - 0.5).floor()).max(0.0) as usize;
        let ix_hi = ((((p.x + self.delta - self.domain.x0) / sx - 0.5).ceil()) as usize).min(m - 1);
        let iy_lo = (((p.y - self.delta - self.domain.y0) / sy - 0.5).floor()).max(0.0) as usize;
        let iy_hi = ((((p.y + self.delta - self.domain.y0) / sy - 0.5).ceil()) as usize).min(m - 1);
        let mut out = Vec::new();
        for iy in iy_lo..=iy_hi {
            for ix in ix_lo..=ix_hi {
                let j = iy * m + ix;
                if self.centers[j].dist(p) <= self.delta {
                    out.push(j);
                }
            }
        }
        out
    }
}

/// Buckets `points` into the patches of `grid` (closed-disk membership).
///
/// Points are hashed into square cells of side `delta`; for each patch only
/// the 3x3 cell neighborhood of its center is probed, followed by an exact
/// distance test. Returns one sorted index list per patch. Points outside
/// the domain are rejected with their row index.
pub fn assign_to_patches(
    points: &[Point2],
    grid: &PatchGrid,
) -> Result<Vec<Vec<usize>>, GeometryError> {
    let delta = grid.delta;
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if !grid.domain.contains(p) {
            return Err(GeometryError::PointOutsideDomain {
                index: i,
                x: p.x,
                y: p.y,
            });
        }
        let key = (
            ((p.x - grid.domain.x0) / delta).floor() as i64,
            ((p.y - grid.domain.y0) / delta).floor() as i64,
        );
        cells.entry(key).or_default().push(i);
    }
    let mut lists = vec![Vec::new(); grid.d()];
    for (j, c) in grid.centers.iter().enumerate() {
        let cx = ((c.x - grid.domain.x0) / delta).floor() as i64;
        let cy = ((c.y - grid.domain.y0) / delta).floor() as i64;
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(bucket) = cells.get(&(cx + dx, cy + dy)) {
                    for &i in bucket {
                        if points[i].dist(c) <= delta {
                            lists[j].push(i);
                        }
                    }
                }
            }
        }
        lists[j].sort_unstable();
    }
    Ok(lists)
}

/// Vogel sunflower layout: `n_add` points quasi-uniformly filling the closed
/// disk of radius `delta` around `center`. Point `m` (1-based) sits at
/// radius `delta * sqrt(m - 1/2) / sqrt(n_add - 1/2)` and angle
/// `4 m pi / (1 + sqrt(5))`; the last point lands exactly on the boundary.
pub fn sunflower_points(center: Point2, delta: f64, n_add: usize) -> Vec<Point2> {
    let golden = 1.0 + 5.0_f64.sqrt();
    let denom = (n_add as f64 - 0.5).sqrt();
    (1..=n_add)
        .map(|m| {
            let u = delta * (m as f64 - 0.5).sqrt() / denom;
            let eta = 4.0 * m as f64 * std::f64::consts::PI / golden;
            Point2::new(center.x + u * eta.cos(), center.y + u * eta.sin())
        })
        .collect()
}

/// Support radius for an added compactly supported bump at
/// `constraint_point`: the midpoint of the two smallest distances to
/// `local_data`, so that exactly one data point lies strictly inside the
/// support in the generic case. `delta` only scales the fallback used when
/// the constraint point coincides with a data point.
pub fn support_radius(constraint_point: &Point2, local_data: &[Point2], delta: f64) -> f64 {
    assert!(!local_data.is_empty(), "support_radius needs local data");
    let mut d1 = f64::INFINITY;
    let mut d2 = f64::INFINITY;
    for p in local_data {
        let r = constraint_point.dist(p);
        if r < d1 {
            d2 = d1;
            d1 = r;
        } else if r < d2 {
            d2 = r;
        }
    }
    if d1 == 0.0 {
        return (1e-6 * delta).min(d2 / 2.0).max(f64::MIN_POSITIVE);
    }
    if d2.is_infinite() {
        return d1 * 2.0;
    }
    if d2 - d1 > 1e-9 {
        (d1 + d2) / 2.0
    } else {
        d1 + 1e-9
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn patch_grid_anchor_sizes() {
        let g = PatchGrid::from_data_count(300, Rect::UNIT).unwrap();
        assert_eq!(g.d(), 64);
        assert_abs_diff_eq!(g.delta, 0.125);

        let g = PatchGrid::from_data_count(1000, Rect::UNIT).unwrap();
        assert_eq!(g.d(), 225);
        assert_abs_diff_eq!(g.delta, 1.0 / 15.0, epsilon = 1e-15);

        let g = PatchGrid::with_patch_count(25, Rect::UNIT).unwrap();
        assert_abs_diff_eq!(g.delta, 0.2);
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(matches!(
            PatchGrid::from_data_count(3, Rect::UNIT),
            Err(GeometryError::TooFewPoints(3))
        ));
        assert!(PatchGrid::from_data_count(4, Rect::UNIT).is_ok());
    }

    #[test]
    fn non_square_patch_count_rejected() {
        assert!(PatchGrid::with_patch_count(24, Rect::UNIT).is_err());
        assert!(PatchGrid::with_patch_count(0, Rect::UNIT).is_err());
    }

    #[test]
    fn coverage_of_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [300usize, 1000] {
            let g = PatchGrid::from_data_count(n, Rect::UNIT).unwrap();
            for _ in 0..10_000 {
                let p = Point2::new(rng.random(), rng.random());
                assert!(!g.covering(&p).is_empty(), "uncovered point {p:?}");
            }
        }
    }

    #[test]
    fn assignment_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = PatchGrid::with_patch_count(25, Rect::UNIT).unwrap();
        let pts: Vec<Point2> = (0..200)
            .map(|_| Point2::new(rng.random(), rng.random()))
            .collect();
        let lists = assign_to_patches(&pts, &g).unwrap();
        for (j, c) in g.centers.iter().enumerate() {
            let brute: Vec<usize> = (0..pts.len())
                .filter(|&i| pts[i].dist(c) <= g.delta)
                .collect();
            assert_eq!(lists[j], brute, "patch {j}");
        }
    }

    #[test]
    fn assignment_membership_conventions() {
        let g = PatchGrid::with_patch_count(4, Rect::UNIT).unwrap();
        // Point at a patch center belongs to that patch.
        let lists = assign_to_patches(&[g.centers[0]], &g).unwrap();
        assert!(lists[0].contains(&0));
        // Point at distance exactly delta is included (closed disk).
        let boundary = Point2::new(g.centers[0].x + g.delta, g.centers[0].y);
        let lists = assign_to_patches(&[boundary], &g).unwrap();
        assert!(lists[0].contains(&0));
    }

    #[test]
    fn outside_point_rejected_with_index() {
        let g = PatchGrid::with_patch_count(4, Rect::UNIT).unwrap();
        let pts = [Point2::new(0.5, 0.5), Point2::new(1.5, 0.5)];
        assert_eq!(
            assign_to_patches(&pts, &g),
            Err(GeometryError::PointOutsideDomain {
                index: 1,
                x: 1.5,
                y: 0.5
            })
        );
    }

    #[test]
    fn sunflower_boundary_and_anchor() {
        let c = Point2::new(0.0, 0.0);
        // Single point lands on the boundary circle.
        let pts = sunflower_points(c, 0.3, 1);
        assert_abs_diff_eq!(pts[0].dist(&c), 0.3, epsilon = 1e-14);
        // Outermost point is always on the boundary.
        for n in [2usize, 5, 17] {
            let pts = sunflower_points(c, 0.7, n);
            assert_abs_diff_eq!(pts[n - 1].dist(&c), 0.7, epsilon = 1e-13);
        }
        // Frozen direct evaluation for n_add=2, delta=1.
        let pts = sunflower_points(c, 1.0, 2);
        let u1 = (0.5f64 / 1.5).sqrt();
        let eta1 = 4.0 * std::f64::consts::PI / (1.0 + 5.0f64.sqrt());
        assert_abs_diff_eq!(pts[0].x, u1 * eta1.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(pts[0].y, u1 * eta1.sin(), epsilon = 1e-15);
        // Numeric anchor cross-checked against an independent high-precision
        // evaluation of the same formula.
        assert_abs_diff_eq!(pts[0].x, -0.4257201202505705, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].y, -0.3899945032268700, epsilon = 1e-12);
    }

    #[test]
    fn sunflower_points_distinct_and_inside() {
        let c = Point2::new(0.5, 0.5);
        for n in 1..=64usize {
            let pts = sunflower_points(c, 0.2, n);
            assert_eq!(pts.len(), n);
            for (i, p) in pts.iter().enumerate() {
                assert!(p.dist(&c) <= 0.2 + 1e-12);
                for q in &pts[i + 1..] {
                    assert!(p.dist(q) > 1e-9, "duplicate sunflower points at n={n}");
                }
            }
        }
        assert!(sunflower_points(c, 0.2, 0).is_empty());
    }

    #[test]
    fn support_radius_branches() {
        let c = Point2::new(0.0, 0.0);
        // Generic midpoint rule.
        let data = [Point2::new(0.1, 0.0), Point2::new(0.3, 0.0)];
        assert_abs_diff_eq!(support_radius(&c, &data, 1.0), 0.2, epsilon = 1e-15);
        // Single datum: rho = 2 * d1.
        let data = [Point2::new(0.05, 0.0)];
        assert_abs_diff_eq!(support_radius(&c, &data, 1.0), 0.1, epsilon = 1e-15);
        // Tie: rho = d1 + 1e-9.
        let data = [Point2::new(0.1, 0.0), Point2::new(0.0, 0.1)];
        assert_abs_diff_eq!(support_radius(&c, &data, 1.0), 0.1 + 1e-9, epsilon = 1e-18);
        // Coincident constraint point: tiny support still below d2/2.
        let data = [Point2::new(0.0, 0.0), Point2::new(0.4, 0.0)];
        let rho = support_radius(&c, &data, 1.0);
        assert!(rho > 0.0 && rho <= 1e-6);
    }

    #[test]
    fn support_radius_isolates_one_datum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let data: Vec<Point2> = (0..6)
                .map(|_| Point2::new(rng.random(), rng.random()))
                .collect();
            let c = Point2::new(rng.random(), rng.random());
            let rho = support_radius(&c, &data, 1.0);
            let inside = data.iter().filter(|p| c.dist(p) < rho).count();
            assert_eq!(inside, 1);
        }
    }
}
