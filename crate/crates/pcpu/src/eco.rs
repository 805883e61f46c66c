//! Predator/two-prey ODE model (herbivores, grass, trees) with a
//! Beddington-De Angelis response, a fixed-step RK4 integrator with
//! nonnegativity clamping, and the herbivore equilibrium surface over the
//! consumption/mortality parameter plane. The surface output is a real
//! nonnegative scattered dataset ready for the positive-constrained fit.

use rayon::prelude::*;
use thiserror::Error;

use crate::Point2;

#[derive(Debug, Error, PartialEq)]
pub enum EcoError {
    #[error("state became non-finite at step {step}")]
    Diverged { step: usize },
    #[error("invalid integration setup: {0}")]
    BadSetup(&'static str),
    #[error("surface cell ({i}, {j}): {source}")]
    SurfaceCell {
        i: usize,
        j: usize,
        source: Box<EcoError>,
    },
}

/// Model parameters. Rates are per day, capacities and half-saturation
/// constants in biomass units, the remaining parameters dimensionless.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct EcoParams {
    /// Herbivore metabolic (mortality) rate.
    pub mu: f64,
    /// Grass growth rate.
    pub r1: f64,
    /// Tree growth rate.
    pub r2: f64,
    /// Grass carrying capacity.
    pub k1: f64,
    /// Tree carrying capacity.
    pub k2: f64,
    /// Inverse maximal consumption of grass.
    pub alpha: f64,
    /// Inverse maximal consumption of trees.
    pub beta: f64,
    /// Conversion factor of grass into herbivore biomass (<= 1).
    pub e: f64,
    /// Conversion factor of trees into herbivore biomass (<= 1).
    pub f: f64,
    /// Daily feeding rate on grass.
    pub a: f64,
    /// Daily feeding rate on trees.
    pub b: f64,
    /// Half-saturation constant for grass consumption.
    pub c: f64,
    /// Half-saturation constant for tree consumption.
    pub g: f64,
}

impl EcoParams {
    /// Dolomiti Bellunesi parameter estimates. The feeding rates `a` and
    /// `b` are not published alongside the rest and must be supplied by
    /// the caller. `alpha` is stored as the evaluated value of the quoted
    /// expression `0.05^-1 = 20`.
    pub fn dolomiti(a: f64, b: f64) -> Self {
        EcoParams {
            mu: 0.03,
            r1: 0.01,
            r2: 0.0006,
            k1: 3_469_640.64,
            k2: 15_695_993.39,
            alpha: 20.0,
            beta: 8.0,
            e: 0.605,
            f: 0.001,
            a,
            b,
            c: 101_862.16,
            g: 1_001_229_580.18,
        }
    }

    /// Published initial conditions for the Dolomiti Bellunesi system.
    pub fn dolomiti_initial_state() -> EcoState {
        EcoState {
            h: 268.750,
            g: 2_313_093.76,
            t: 1_046_399.56,
        }
    }
}

/// Population biomasses: herbivores, grass, trees.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EcoState {
    pub h: f64,
    pub g: f64,
    pub t: f64,
}

impl EcoState {
    fn is_finite(&self) -> bool {
        self.h.is_finite() && self.g.is_finite() && self.t.is_finite()
    }

    fn clamped(self) -> Self {
        EcoState {
            h: self.h.max(0.0),
            g: self.g.max(0.0),
            t: self.t.max(0.0),
        }
    }

    fn norm(&self) -> f64 {
        self.h.abs().max(self.g.abs()).max(self.t.abs())
    }
}

/// Right-hand side of the predator/two-prey system.
pub fn eco_rhs(p: &EcoParams, s: &EcoState) -> (f64, f64, f64) {
    let grass_den = p.c + s.h + p.alpha * s.g;
    let tree_den = p.g + s.h + p.beta * s.t + p.alpha * s.g;
    let grass_feed = s.h * s.g / grass_den;
    let tree_feed = s.h * s.t / tree_den;
    let dh = -p.mu * s.h + p.a * p.e * grass_feed + p.b * p.f * tree_feed;
    let dg = p.r1 * s.g * (1.0 - s.g / p.k1) - p.a * grass_feed;
    let dt = p.r2 * s.t * (1.0 - s.t / p.k2) - p.b * tree_feed;
    (dh, dg, dt)
}

fn rk4_step(p: &EcoParams, s: &EcoState, dt: f64) -> EcoState {
    let add = |s: &EcoState, k: (f64, f64, f64), w: f64| EcoState {
        h: s.h + w * k.0,
        g: s.g + w * k.1,
        t: s.t + w * k.2,
    };
    let k1 = eco_rhs(p, s);
    let k2 = eco_rhs(p, &add(s, k1, dt / 2.0));
    let k3 = eco_rhs(p, &add(s, k2, dt / 2.0));
    let k4 = eco_rhs(p, &add(s, k3, dt));
    EcoState {
        h: s.h + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        g: s.g + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        t: s.t + dt / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
    }
}

/// Outcome of an integration run.
#[derive(Clone, Debug)]
pub struct Integration {
    pub state: EcoState,
    /// Max-norm of the vector field at the final state, relative to the
    /// state norm; small values indicate a (numerical) equilibrium.
    pub stationarity: f64,
    pub trajectory: Option<Vec<EcoState>>,
}

/// Classical fixed-step RK4 from `s0` to `t_end`, clamping each state at
/// zero from below (negativity only arises from discretization error).
pub fn integrate(
    p: &EcoParams,
    s0: EcoState,
    t_end: f64,
    dt: f64,
    record_trajectory: bool,
) -> Result<Integration, EcoError> {
    if !(dt > 0.0) || t_end < dt {
        return Err(EcoError::BadSetup("need dt > 0 and t_end >= dt"));
    }
    let n_steps = (t_end / dt).round() as usize;
    let mut s = s0.clamped();
    let mut trajectory = record_trajectory.then(|| {
        let mut v = Vec::with_capacity(n_steps + 1);
        v.push(s);
        v
    });
    for step in 0..n_steps {
        s = rk4_step(p, &s, dt).clamped();
        if !s.is_finite() {
            return Err(EcoError::Diverged { step });
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(s);
        }
    }
    let rhs = eco_rhs(p, &s);
    let rhs_norm = rhs.0.abs().max(rhs.1.abs()).max(rhs.2.abs());
    let stationarity = rhs_norm / s.norm().max(f64::MIN_POSITIVE);
    if stationarity >= 1e-8 {
        log::warn!("integration ended away from equilibrium (stationarity {stationarity:.3e})");
    }
    Ok(Integration {
        state: s,
        stationarity,
        trajectory,
    })
}

/// Herbivore equilibrium surface: for each `(alpha, mu)` on an
/// `n_side x n_side` grid, integrate from the published initial state and
/// record the final herbivore biomass. Points are returned in unit-square
/// coordinates of the `(alpha, mu)` ranges, values are the (nonnegative)
/// biomasses.
#[allow(clippy::too_many_arguments)]
pub fn equilibrium_surface(
    p_base: &EcoParams,
    alpha_range: (f64, f64),
    mu_range: (f64, f64),
    n_side: usize,
    t_end: f64,
    dt: f64,
) -> Result<(Vec<Point2>, Vec<f64>), EcoError> {
    if n_side < 2 {
        return Err(EcoError::BadSetup("surface grid needs n_side >= 2"));
    }
    let s0 = EcoParams::dolomiti_initial_state();
    let cells: Vec<Result<f64, EcoError>> = (0..n_side * n_side)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n_side, idx / n_side);
            let fx = i as f64 / (n_side - 1) as f64;
            let fy = j as f64 / (n_side - 1) as f64;
            let mut p = *p_base;
            p.alpha = alpha_range.0 + fx * (alpha_range.1 - alpha_range.0);
            p.mu = mu_range.0 + fy * (mu_range.1 - mu_range.0);
            integrate(&p, s0, t_end, dt, false)
                .map(|r| r.state.h)
                .map_err(|source| EcoError::SurfaceCell {
                    i,
                    j,
                    source: Box::new(source),
                })
        })
        .collect();
    let mut points = Vec::with_capacity(n_side * n_side);
    let mut values = Vec::with_capacity(n_side * n_side);
    for (idx, cell) in cells.into_iter().enumerate() {
        let (i, j) = (idx % n_side, idx / n_side);
        points.push(Point2::new(
            i as f64 / (n_side - 1) as f64,
            j as f64 / (n_side - 1) as f64,
        ));
        values.push(cell?);
    }
    Ok((points, values))
}
