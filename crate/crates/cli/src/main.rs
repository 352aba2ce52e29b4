mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;


/// Mittag-Leffler propagators and dispersive diagnostics for the
/// space-time fractional Schroedinger equation.
#[derive(Parser)]
#[command(name = "fracwave", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every experiment: optional config file (flags override
/// file entries) and output destinations.
#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// line-oriented `key = value` config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary output path
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct SymbolArgs {
    /// time fractional order, in (0, 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// spatial order (Riesz exponent), positive
    #[arg(long)]
    beta: Option<f64>,
    /// phase order, in [0, 1]; must be >= alpha unless overridden
    #[arg(long)]
    gamma: Option<f64>,
    /// permit non-tempered symbols (gamma < alpha)
    #[arg(long)]
    allow_nontempered: bool,
}

#[derive(Args, Clone, Default)]
struct GridArgs {
    /// spatial dimension, 1..=3
    #[arg(long)]
    dim: Option<usize>,
    /// grid points per axis (power of two)
    #[arg(long)]
    n: Option<usize>,
    /// box extent per axis
    #[arg(long = "L")]
    l: Option<f64>,
    /// initial datum: gaussian, bump, annulus_wave
    #[arg(long)]
    datum: Option<String>,
    /// load the initial datum from a field dump instead of a preset
    #[arg(long)]
    datum_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate E_{alpha,beta}(z) at one complex argument
    MlEval {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        alpha: Option<f64>,
        /// second Mittag-Leffler parameter (default 1)
        #[arg(long)]
        beta_ml: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z_im: Option<f64>,
    },
    /// Propagate a datum under the Mittag-Leffler flow (or a named unitary
    /// flow) and write a field dump
    Propagate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// evolution time
        #[arg(long)]
        t: Option<f64>,
        /// unitary dispersion relation (abs, square, indicator, powabs:A,
        /// linear:C) instead of the Mittag-Leffler symbol
        #[arg(long)]
        w: Option<String>,
        /// field dump output path
        #[arg(long)]
        field_out: Option<PathBuf>,
    },
    /// Propagate over a geometric time grid and record decay observables
    DecayScan {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// geometric time grid lo:hi:count
        #[arg(long)]
        t_geom: Option<String>,
        /// observable: linf_u, linf_u_squared, tail_mass:R
        #[arg(long)]
        observable: Option<String>,
        /// fit window lo:hi (log-log least squares)
        #[arg(long)]
        window: Option<String>,
    },
    /// Band-kernel sups against the sharp dispersive envelope
    EnvelopeSweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        t_geom: Option<String>,
        /// dyadic band exponents: `lo..hi` or comma list
        #[arg(long, allow_hyphen_values = true)]
        bands: Option<String>,
    },
    /// Sup of the residual multiplier |m_{t,alpha}| over frequencies
    ResidualNorm {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// L2 norms of the residual operator over a time grid
    StrongConvergence {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t_geom: Option<String>,
    },
    /// Relative L2 mass outside a ball after propagation
    TailMass {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        symbol: SymbolArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// FBI-transform Gaussian-decay probe
    FbiScan {
        #[command(flatten)]
        common: CommonArgs,
        /// closed-form dispersion relation (abs, square, powabs:A, linear:C)
        #[arg(long)]
        w: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        /// lambda grid lo:hi:count (linear); default 1:6:11
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Dyadic Besov norm of a datum
    BesovNorm {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// integrability index p >= 1 (or `inf`)
        #[arg(long)]
        p: Option<String>,
        /// summability index q >= 1 (or `inf`)
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        homogeneous: bool,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(threads) = std::env::var("FRACWAVE_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
