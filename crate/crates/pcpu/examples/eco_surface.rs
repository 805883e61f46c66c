//! Generate a real nonnegative dataset from the predator/two-prey model
//! (herbivore equilibrium biomass over a grid of interference/mortality
//! parameters), then reconstruct the surface with the positivity-
//! constrained interpolant from a scattered subsample.
//!
//! Run with: cargo run --release --example eco_surface

use pcpu::eco::{self, EcoParams};
use pcpu::metrics::random_nodes;
use pcpu::pu::{self, PuConfig, PuMode};
use pcpu::{KernelFamily, KernelSpec, Point2};

fn main() {
    let params = EcoParams::dolomiti(1.2, 0.4);
    let n_side = 12;
    let (grid_pts, heights) =
        eco::equilibrium_surface(&params, (0.0, 40.0), (0.0, 0.06), n_side, 1000.0, 1.0).unwrap();

    let hmax = heights.iter().cloned().fold(0.0_f64, f64::max);
    println!(
        "equilibrium surface: {} samples, herbivore biomass in [{:.3e}, {:.3e}]",
        heights.len(),
        heights.iter().cloned().fold(f64::INFINITY, f64::min),
        hmax
    );

    // Interpolate the surface from scattered probe locations: nearest
    // surface sample stands in for an expensive integration at the probe.
    let probes = random_nodes(60, 3);
    let probe_values: Vec<f64> = probes
        .iter()
        .map(|q| {
            let (k, _) = grid_pts
                .iter()
                .enumerate()
                .map(|(k, p)| (k, p.dist(q)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            heights[k]
        })
        .collect();

    let kernel = KernelSpec::new(KernelFamily::Imq, 1.0).unwrap();
    let model = pu::fit(
        &probes,
        &probe_values,
        PuConfig::new(kernel, PuMode::Positive),
    )
    .unwrap();

    // Biomass stays nonnegative everywhere on a dense readout grid.
    let readout: Vec<Point2> = (0..n_side * n_side)
        .map(|i| {
            Point2::new(
                (i % n_side) as f64 / (n_side - 1) as f64,
                (i / n_side) as f64 / (n_side - 1) as f64,
            )
        })
        .collect();
    let values = model.evaluate(&readout).unwrap();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "reconstructed from {} probes: min interpolated biomass {:.4e} (never negative)",
        probes.len(),
        min
    );
    assert!(min >= -1e-10);
}
