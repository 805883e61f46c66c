use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcpu::cli::{self, Config, Method};
use pcpu::eco::{self, EcoParams};

#[derive(Parser)]
#[command(name = "pcpu", about = "Positivity-constrained partition-of-unity interpolation")]
struct TopLevel {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the configured methods, write grid CSVs and report.json.
    Fit(FitArgs),
    /// Benchmark every method across node counts; print a table.
    Compare(CompareArgs),
    /// Integrate the predator-prey model over a parameter grid and write
    /// the equilibrium surface as CSV.
    EcoSurface(EcoArgs),
}

#[derive(Args)]
struct FitArgs {
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's node count.
    #[arg(long)]
    n: Option<usize>,
    /// Override the config's output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    /// Node counts, e.g. --n-list 300,1000.
    #[arg(long, value_delimiter = ',', default_value = "300,1000")]
    n_list: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EcoArgs {
    /// Predation rate (per day).
    #[arg(long)]
    a: f64,
    /// Predation half-saturation constant.
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = 40.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.0)]
    mu_min: f64,
    #[arg(long, default_value_t = 0.06)]
    mu_max: f64,
    /// Grid side: n_side x n_side parameter pairs.
    #[arg(long, default_value_t = 10)]
    n_side: usize,
    /// Integration horizon (days).
    #[arg(long, default_value_t = 7300.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// Output CSV path.
    #[arg(long, default_value = "eco_surface.csv")]
    out: PathBuf,
}

fn apply_overrides(config: &mut Config, seed: Option<u64>, n: Option<usize>, out: Option<PathBuf>) {
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(n) = n {
        config.n = Some(n);
    }
    if let Some(out) = out {
        config.output_dir = out;
    }
}

fn run() -> Result<(), String> {
    match TopLevel::parse().command {
        Command::Fit(args) => {
            let mut config = Config::from_file(&args.config).map_err(|e| e.to_string())?;
            apply_overrides(&mut config, args.seed, args.n, args.output_dir);
            let report = cli::run_experiment(&config).map_err(|e| e.to_string())?;
            for (method, r) in &report.results {
                let err = r
                    .rmse
                    .map(|v| format!("rmse {v:.4e}"))
                    .unwrap_or_else(|| "rmse n/a".into());
                println!(
                    "{method}: {err}, min {:.4e}, negatives {}",
                    r.min_value, r.n_negative
                );
            }
            println!("wrote {}", config.output_dir.join("report.json").display());
            Ok(())
        }
        Command::Compare(args) => {
            let mut config = Config::from_file(&args.config).map_err(|e| e.to_string())?;
            apply_overrides(&mut config, args.seed, None, None);
            if config.methods.is_empty() {
                config.methods = Method::ALL.to_vec();
            }
            let rows = cli::run_compare(&config, &args.n_list).map_err(|e| e.to_string())?;
            print!("{}", cli::format_compare_table(&rows));
            Ok(())
        }
        Command::EcoSurface(args) => {
            let params = EcoParams::dolomiti(args.a, args.b);
            let (points, heights) = eco::equilibrium_surface(
                &params,
                (args.alpha_min, args.alpha_max),
                (args.mu_min, args.mu_max),
                args.n_side,
                args.t_end,
                args.dt,
            )
            .map_err(|e| format!("eco: {e}"))?;
            cli::write_grid_csv(&args.out, &points, &heights).map_err(|e| e.to_string())?;
            println!("wrote {} ({} samples)", args.out.display(), points.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
