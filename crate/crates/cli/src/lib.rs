//! Batch front end for `credit-curve`: reads quote and curve files, runs
//! valuations, fits and return analytics, and writes plot-ready CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "creditcurve", version, about = "Credit spread curves from bond and CDS quotes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model price, kernels and spreads of each instrument on a given curve.
    Value(CommonArgs),
    /// Market spread measures: yield, Z-spread, asset-swap, CDS upfront and par-adjusted spread.
    Spread(CommonArgs),
    /// Fit one curve per issuer.
    Fit(CommonArgs),
    /// Fit the rating grid across the whole universe.
    FitGrid(CommonArgs),
    /// Carry, rolldown and relative value over a horizon.
    Analytics(CommonArgs),
    /// Fit every as-of date in the quote files and emit (date, series, value) rows.
    History(HistoryArgs),
    /// Re-emit the report of a saved fit result.
    Report {
        /// fit_result.json written by fit or fit-grid.
        #[arg(long)]
        fit_result: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Zero curve: tenor_years,zero_rate[,as_of].
    #[arg(long)]
    pub riskfree: Option<PathBuf>,
    #[arg(long)]
    pub bonds: Option<PathBuf>,
    #[arg(long)]
    pub cds: Option<PathBuf>,
    /// Sovereign spreads: country,tenor_years,spread_bp.
    #[arg(long)]
    pub sovereign: Option<PathBuf>,
    /// Flat key-value TOML run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Valuation date, YYYY-MM-DD.
    #[arg(long)]
    pub as_of: Option<String>,
    /// schedule, schedule:<floor> or fixed:<value>.
    #[arg(long)]
    pub recovery: Option<String>,
    #[arg(long)]
    pub fix_c: Option<f64>,
    /// fit, fixed:<value> or off.
    #[arg(long)]
    pub em_alpha: Option<String>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub convergence_fraction: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Curve to value against: TOML (a,b,c or aa/bbb/b anchors plus c) or a fit_result.json.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Rating transition matrix: from_rating,AAA,...,CCC,D.
    #[arg(long)]
    pub transitions: Option<PathBuf>,
    /// Report tenors in years, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub tenors: Option<Vec<f64>>,
    #[arg(long)]
    pub allow_underdetermined: bool,
    /// Output directory; tables go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct HistoryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// grid or single.
    #[arg(long, default_value = "grid")]
    pub mode: String,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Value(a) => commands::value(&a),
        Command::Spread(a) => commands::spread(&a),
        Command::Fit(a) => commands::fit(&a, report::FitMode::SingleName),
        Command::FitGrid(a) => commands::fit(&a, report::FitMode::RatingGrid),
        Command::Analytics(a) => commands::analytics(&a),
        Command::History(a) => commands::history(&a),
        Command::Report { fit_result, out } => commands::report(&fit_result, out.as_deref()),
    }
}
