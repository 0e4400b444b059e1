//! `efv`: verification harness for explicit formulas over zero tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Outcome, RunConfig};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "efv",
    version,
    about = "Evaluate explicit formulas against tables of L-function zeros"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Descriptor file (default: zeta.desc in the data directory).
    #[arg(long, global = true)]
    descriptor: Option<PathBuf>,
    /// Zero table (default: <descriptor stem>_zeros.txt next to the descriptor).
    #[arg(long, global = true)]
    zeros: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Sum sequentially in table order.
    #[arg(long, global = true)]
    deterministic: bool,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gaussian-weighted zero sums against their small-u predictions.
    Thm1 {
        /// Comma-separated values of u.
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
        /// Shift: 0, u, log:m, -log:m or a number.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        v: String,
        #[arg(long = "T")]
        t: Option<f64>,
        /// Residual band (default 5 for v = 0 or u, 2 for ±log m).
        #[arg(long)]
        band: Option<f64>,
    },
    /// Both sides of the explicit formula, or a small-u decay sweep.
    Weil {
        #[arg(long, default_value = "gaussian:w=0.05")]
        f: String,
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v: f64,
        #[arg(long = "T")]
        t: Option<f64>,
        /// Largest prime power in the arithmetic side.
        #[arg(long)]
        n_max: Option<u64>,
        /// Comma-separated u values for a decay sweep.
        #[arg(long, value_delimiter = ',')]
        sweep_u: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.25)]
        slack: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Li coefficients from zeros, from primes, and asymptotically.
    Li {
        /// `a..b` or a single nonzero index.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, value_delimiter = ',', default_value = "zerosum")]
        methods: Vec<String>,
        #[arg(long = "X", default_value_t = 1e7)]
        x: f64,
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long)]
        check_positivity: bool,
        #[arg(long, default_value_t = 40)]
        working_digits: u32,
    },
    /// Empirical zero count against the smooth main term.
    Count {
        /// Comma-separated heights or `start:stop:step`.
        #[arg(long)]
        grid: String,
        /// Allowed `|deviation| / log T`.
        #[arg(long, default_value_t = 2.0)]
        band: f64,
    },
    /// `Σ n^ρ` over zeros up to T against `−(T/π)Λ(n)`.
    Landau {
        #[arg(long)]
        n: u64,
        #[arg(long = "T", default_value_t = 500.0)]
        t: f64,
        /// Allowed `|residual| / (n^{3/2} log T)`.
        #[arg(long, default_value_t = 3.0)]
        band: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_args(
        cli.global.descriptor,
        cli.global.zeros,
        cli.global.format,
        cli.global.output,
        cli.global.deterministic,
        (cli.global.rel_tol, cli.global.abs_tol, cli.global.max_subdivisions),
    )
    .and_then(|config| match cli.command {
        Command::Thm1 { u, v, t, band } => commands::thm1(&config, &u, &v, t, band),
        Command::Weil {
            f,
            u,
            v,
            t,
            n_max,
            sweep_u,
            slack,
            tol,
        } => match sweep_u {
            Some(us) => commands::weil_sweep(&config, &f, v, &us, slack),
            None => commands::weil(&config, &f, u, v, t, n_max, tol),
        },
        Command::Li {
            n,
            methods,
            x,
            t,
            check_positivity,
            working_digits,
        } => commands::li(&config, &n, &methods, x, t, check_positivity, working_digits),
        Command::Count { grid, band } => commands::count(&config, &grid, band),
        Command::Landau { n, t, band } => commands::landau(&config, n, t, band),
    });
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("efv: {e}");
            ExitCode::from(2)
        }
    }
}
