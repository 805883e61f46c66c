//! Print the sunflower-spiral constraint points used to augment a patch,
//! together with the support radius each added bump would get for a small
//! sample of local data sites. An ASCII plot shows the spiral filling the
//! patch disk evenly.
//!
//! Run with: cargo run --example sunflower_layout

use pcpu::geometry::{sunflower_points, support_radius};
use pcpu::Point2;

fn main() {
    let center = Point2::new(0.0, 0.0);
    let delta = 1.0;
    let local_data = [
        Point2::new(0.3, 0.2),
        Point2::new(-0.5, 0.1),
        Point2::new(0.1, -0.6),
    ];

    let n_add = 24;
    let pts = sunflower_points(center, delta, n_add);

    println!("{n_add} sunflower points on the unit disk:");
    for (m, p) in pts.iter().enumerate() {
        let rho = support_radius(p, &local_data, delta);
        println!(
            "  #{:>2}  ({:>8.4}, {:>8.4})  |p| = {:.4}  support radius {:.4}",
            m + 1,
            p.x,
            p.y,
            p.dist(&center),
            rho
        );
    }

    // ASCII plot: 'o' spiral points, 'x' data sites, '.' disk interior.
    let side = 33;
    println!();
    for iy in (0..side).rev() {
        let mut row = String::new();
        for ix in 0..side {
            let gx = -1.0 + 2.0 * ix as f64 / (side - 1) as f64;
            let gy = -1.0 + 2.0 * iy as f64 / (side - 1) as f64;
            let g = Point2::new(gx, gy);
            let cell = 2.0 / (side - 1) as f64;
            let ch = if pts.iter().any(|p| p.dist(&g) < 0.6 * cell) {
                'o'
            } else if local_data.iter().any(|p| p.dist(&g) < 0.8 * cell) {
                'x'
            } else if g.dist(&center) <= delta {
                '.'
            } else {
                ' '
            };
            row.push(ch);
            row.push(' ');
        }
        println!("{row}");
    }
}
