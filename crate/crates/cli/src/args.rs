use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "talmud",
    version,
    about = "Weighted Talmudic rebalancing toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the rule's utility u(m, q) for given holdings.
    Utility(UtilityArgs),
    /// Sample the rebalancing supply and demand curves to CSV.
    Curves(CurvesArgs),
    /// Backtest threshold-triggered rebalancing and write a JSON report.
    Simulate(SimulateArgs),
    /// Backtest a list of trigger thresholds over one path, CSV out.
    Scan(ScanArgs),
    /// Estimate order-book depth and the equivalent agent budget.
    Depth(DepthArgs),
}

#[derive(Debug, Args)]
pub struct UtilityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Number of rows.
    #[arg(long)]
    pub n: usize,
    /// Supply is reported only up to this fraction of q0.
    #[arg(long, allow_negative_numbers = true)]
    pub qmax_fraction: f64,
    /// Last sampled quantity, as a multiple of q0 [default: qmax-fraction].
    #[arg(long, allow_negative_numbers = true)]
    pub q_end: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PathSource {
    /// Single-column CSV with header `price`.
    #[arg(long)]
    pub path_csv: Option<PathBuf>,
    /// Deterministic alternation: p0,pct_dp,legs.
    #[arg(long, value_name = "P0,PCT_DP,LEGS")]
    pub zigzag: Option<ZigzagSpec>,
    /// Seeded geometric Brownian motion: p0,mu,sigma,steps,seed.
    #[arg(
        long,
        value_name = "P0,MU,SIGMA,STEPS,SEED",
        allow_hyphen_values = true
    )]
    pub gbm: Option<GbmSpec>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: PathSource,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Rebalance once the relative price difference reaches this value.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Proportional fee on traded notional.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub fee: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub wealth: f64,
    /// Add a compounded annual rate assuming this many trades per year.
    #[arg(long, value_name = "TRADES_PER_YEAR")]
    pub annualize: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: PathSource,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Comma-separated trigger thresholds.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub thresholds: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub fee: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    /// CSV with header `side,price,quantity`.
    #[arg(long)]
    pub book_csv: PathBuf,
    /// Half-width of the price window around the mid.
    #[arg(long, allow_negative_numbers = true)]
    pub window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZigzagSpec {
    pub p0: f64,
    pub pct_dp: f64,
    pub legs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmSpec {
    pub p0: f64,
    pub mu: f64,
    pub sigma: f64,
    pub steps: usize,
    pub seed: u64,
}

fn fields<const N: usize>(s: &str) -> Result<[&str; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    parts.try_into().map_err(|parts: Vec<&str>| {
        format!("expected {N} comma-separated values, got {}", parts.len())
    })
}

fn num<T: FromStr>(field: &str, name: &str) -> Result<T, String> {
    field
        .parse()
        .map_err(|_| format!("invalid {name} `{field}`"))
}

impl FromStr for ZigzagSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [p0, pct_dp, legs] = fields(s)?;
        Ok(Self {
            p0: num(p0, "p0")?,
            pct_dp: num(pct_dp, "pct_dp")?,
            legs: num(legs, "legs")?,
        })
    }
}

impl FromStr for GbmSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let [p0, mu, sigma, steps, seed] = fields(s)?;
        Ok(Self {
            p0: num(p0, "p0")?,
            mu: num(mu, "mu")?,
            sigma: num(sigma, "sigma")?,
            steps: num(steps, "steps")?,
            seed: num(seed, "seed")?,
        })
    }
}
