//! Benchmark the constrained fit against the plain partition-of-unity
//! interpolant, classical Shepard weighting, and the single-patch global
//! constrained fit, at two node counts.
//!
//! Run with: cargo run --release --example method_comparison

use pcpu::cli::{format_compare_table, run_compare, Config, Method};

fn main() {
    let config = Config {
        methods: Method::ALL.to_vec(),
        kernel: "imq".into(),
        eps: 1.0,
        n: None,
        seed: 1,
        d_override: None,
        function: Some("f2".into()),
        data: None,
        eval_side: 40,
        shepard_power: 2.0,
        output_dir: "out".into(),
    };
    let rows = run_compare(&config, &[300, 600]).unwrap();
    print!("{}", format_compare_table(&rows));
    println!("\nmin < 0 with neg > 0 marks methods that undershoot the data's sign.");
}
