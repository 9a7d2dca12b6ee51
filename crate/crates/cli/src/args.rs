//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::rates::{parse_positive_list, parse_rates};

#[derive(Debug, Parser)]
#[command(name = "fraccount", version, about = "Fractional counting process with jumps 1..k")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FptMethod {
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(name = "N")]
    N,
    #[value(name = "M")]
    M,
}

/// A comma-separated list given as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

fn rates(s: &str) -> Result<List, String> {
    parse_rates(s).map(List)
}

fn grid(s: &str) -> Result<List, String> {
    parse_positive_list(s, "grid value").map(List)
}

fn nonneg(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a decimal number"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{s:?} must be nonnegative and finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match nonneg(s)? {
        v if v > 0.0 => Ok(v),
        _ => Err(format!("{s:?} must be positive")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional Poisson pmf P{N(t) = n}, n = 0..nmax.
    PmfN {
        #[arg(long, value_parser = positive)]
        lam: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_parser = nonneg)]
        t: f64,
        #[arg(long)]
        nmax: u32,
    },
    /// Pmf P{M(t) = j}, j = 0..jmax, with the displayed mass.
    PmfM {
        #[arg(long, value_parser = rates)]
        rates: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_parser = nonneg)]
        t: f64,
        #[arg(long)]
        jmax: usize,
    },
    /// Tables for k = 3, nu = 0.5, unit rates at t = 1 and t = 2.
    Figure1 {
        #[arg(long, default_value_t = 11)]
        jmax: usize,
    },
    /// Pmf surface over t in [0, 2] for unit rates.
    Figure2 {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        tsteps: usize,
        #[arg(long, default_value_t = 11)]
        jmax: usize,
        #[arg(long, value_parser = rates, default_value = "1,1,1")]
        rates: List,
    },
    /// Moments E[M(t)^m] for m = 1..M, with mean and variance.
    Moments {
        #[arg(long, value_parser = rates)]
        rates: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_parser = nonneg)]
        t: f64,
        #[arg(long)]
        m: u32,
    },
    /// Distribution function of the first jump of amplitude j.
    Waiting {
        #[arg(long, value_parser = rates)]
        rates: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        j: usize,
        #[arg(long, value_parser = nonneg)]
        t: f64,
    },
    /// Probability that level n is reached by time t.
    Fpt {
        #[arg(long, value_parser = rates)]
        rates: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = nonneg)]
        t: f64,
        #[arg(long, value_enum)]
        method: FptMethod,
        #[arg(long, default_value_t = 100_000)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate paths; pmf estimates with standard errors, or one row per path.
    Simulate {
        #[arg(long, value_parser = rates)]
        rates: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_parser = nonneg)]
        horizon: f64,
        #[arg(long)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        jmax: usize,
        /// Print a summary row for every path instead of pmf estimates.
        #[arg(long)]
        per_path: bool,
    },
    /// Relative deviation E|X^m / E X^m - 1| along a grid of rates.
    Cutoff {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_parser = grid)]
        grid: List,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_parser = nonneg)]
        t: f64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base rates; in mode M the grid replaces the rate of amplitude `index`.
        #[arg(long, value_parser = rates)]
        rates: Option<List>,
        #[arg(long, default_value_t = 1)]
        index: usize,
    },
    /// Cross-checks: closed forms against reference values and simulation.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

/// Parses an argument vector (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}
