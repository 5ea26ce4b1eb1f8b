use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use talmud::book::{depth_budget, read_book_csv};
use talmud::curves::{sample_curves_over, write_curves_csv};
use talmud::rule::{utility_value, Holdings, UtilityContext};
use talmud::sim::{gen_gbm, gen_zigzag, load_path_csv, run_backtest, threshold_scan};
use talmud::{CurveAnchor, PricePath, TriggerPolicy, Weights};

use crate::args::{CurvesArgs, DepthArgs, PathSource, ScanArgs, SimulateArgs, UtilityArgs};

/// Exit statuses. Clap itself exits with [`USAGE`] on malformed flags.
pub const USAGE: u8 = 2;
pub const DOMAIN: u8 = 3;
pub const IO: u8 = 4;
pub const PARSE: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    /// A parameter failed the library's validation.
    Domain(talmud::Error),
    /// An input file could not be read or written.
    Io(String, io::Error),
    /// An input file was read but its contents are malformed.
    Parse(String, talmud::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Domain(_) => DOMAIN,
            CliError::Io(..) => IO,
            CliError::Parse(..) => PARSE,
        })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Parse(path, e) => write!(f, "{path}: {e}"),
        }
    }
}

impl From<talmud::Error> for CliError {
    fn from(err: talmud::Error) -> Self {
        match err {
            talmud::Error::Io(e) => CliError::Io("<output>".into(), e),
            other => CliError::Domain(other),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Io(path.display().to_string(), e))
}

/// Reads an input file with `load`, classifying failures as I/O or parse.
fn read_input<T>(
    path: &Path,
    load: impl FnOnce(BufReader<File>) -> talmud::Result<T>,
) -> Result<T> {
    load(open(path)?).map_err(|e| match e {
        talmud::Error::Io(io) => CliError::Io(path.display().to_string(), io),
        other => CliError::Parse(path.display().to_string(), other),
    })
}

/// Runs `emit` against the output file, or stdout when no path is given.
fn with_output(
    out: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> talmud::Result<()>,
) -> Result<()> {
    let name = out.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
    let io_err = |e| CliError::Io(name.clone(), e);
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    };
    emit(&mut sink).map_err(|e| match e {
        talmud::Error::Io(io) => io_err(io),
        other => CliError::Domain(other),
    })?;
    sink.flush().map_err(io_err)
}

fn load_path(source: &PathSource) -> Result<PricePath> {
    if let Some(file) = &source.path_csv {
        return read_input(file, load_path_csv);
    }
    if let Some(z) = source.zigzag {
        return Ok(gen_zigzag(z.p0, z.pct_dp, z.legs)?);
    }
    if let Some(g) = source.gbm {
        return Ok(gen_gbm(g.p0, g.mu, g.sigma, g.steps, g.seed)?);
    }
    unreachable!("clap requires exactly one path source")
}

pub fn utility(args: &UtilityArgs) -> Result<()> {
    let ctx = UtilityContext::new(args.p0, Weights::new(args.alpha)?)?;
    let holdings = Holdings::new(args.m, args.q)?;
    println!("{}", utility_value(&holdings, &ctx));
    Ok(())
}

pub fn curves(args: &CurvesArgs) -> Result<()> {
    let anchor = CurveAnchor::new(args.p0, args.q0, Weights::new(args.alpha)?)?;
    let q_end = args.q_end.unwrap_or(args.qmax_fraction) * args.q0;
    let rows = sample_curves_over(&anchor, args.n, q_end, args.qmax_fraction)?;
    with_output(args.out.as_deref(), |w| write_curves_csv(&rows, w))
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let weights = Weights::new(args.alpha)?;
    let policy = TriggerPolicy::new(args.threshold)?;
    let path = load_path(&args.source)?;
    let report = run_backtest(&path, weights, policy, args.fee, args.wealth)?;

    let mut json = report.to_json();
    json.path = Some(path.meta().to_string());
    if let Some(n) = args.annualize {
        json.annualization = Some(report.annualization(n)?);
    }
    with_output(args.out.as_deref(), |w| {
        json.write_to(&mut *w)?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn scan(args: &ScanArgs) -> Result<()> {
    let weights = Weights::new(args.alpha)?;
    let path = load_path(&args.source)?;
    let rows = threshold_scan(&path, weights, &args.thresholds, args.fee)?;
    with_output(args.out.as_deref(), |w| {
        writeln!(w, "threshold,trade_count,growth_ratio_total")?;
        for row in &rows {
            writeln!(
                w,
                "{},{},{}",
                row.threshold, row.trade_count, row.growth_ratio_total
            )?;
        }
        Ok(())
    })
}

pub fn depth(args: &DepthArgs) -> Result<()> {
    let book = read_input(&args.book_csv, read_book_csv)?;
    let (est, budget) = depth_budget(&book, args.window)?;
    println!("mid={}", est.mid);
    println!("bid_slope={}", est.bid_slope);
    println!("ask_slope={}", est.ask_slope);
    println!("slope={}", est.slope);
    println!("budget={budget}");
    Ok(())
}
