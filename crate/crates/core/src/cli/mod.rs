//! The `spinestat` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 enumeration cap exceeded,
//! 3 verification failure.

mod report;
mod verify;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{limit_formula, limit_fraction};
use crate::error::Error;
use crate::ratio::ExactRatio;
use crate::stats::{
    average_parts, dist_closed_all, dist_exhaustive_with_cap, dist_recurrence, dist_series,
    SpineDistribution,
};
use crate::trees::{enumerate_with_cap, Sampler, DEFAULT_CAP};

pub use report::ReportRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "spinestat",
    version,
    about = "Right-branch statistics of binary trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distribution of segment counts over all trees of one size.
    Dist(DistArgs),
    /// Exact average segment count.
    Average(AverageArgs),
    /// Limiting fraction of trees with k segments.
    Limit(LimitArgs),
    /// Cross-check every route and identity up to a size.
    Verify(VerifyArgs),
    /// Compare sampled trees against the exact distribution.
    Sample(SampleArgs),
    /// Print every tree of one size as a preorder bit code.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exhaustive,
    Recurrence,
    Series,
    Closed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Recurrence => "recurrence",
            Method::Series => "series",
            Method::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct AverageArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "max-n")]
    pub max_n: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

/// Failure of a single command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("write failed: {e}"))
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Dist(a) => cmd_dist(a, out, err),
        Command::Average(a) => cmd_average(a, out),
        Command::Limit(a) => cmd_limit(a, out),
        Command::Verify(a) => verify::cmd_verify(a.max_n, a.cap, out),
        Command::Sample(a) => cmd_sample(a, out, err),
        Command::Enumerate(a) => cmd_enumerate(a, out),
    }
}

pub fn distribution(n: usize, method: Method, cap: usize) -> crate::Result<SpineDistribution> {
    Ok(match method {
        Method::Exhaustive => dist_exhaustive_with_cap(n, cap)?,
        Method::Recurrence => dist_recurrence(n),
        Method::Series => dist_series(n),
        Method::Closed => dist_closed_all(n),
    })
}

const SIZE_ZERO_NOTE: &str =
    "size 0 is the single external node: no internal nodes and no right-branch segments";

fn cmd_dist(a: &DistArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let dist = distribution(a.n, a.method, a.cap)?;
    let rows = report::rows(&dist, a.precision);
    let note = (a.n == 0).then_some(SIZE_ZERO_NOTE);
    match a.format {
        Format::Csv => {
            report::write_dist_csv(&rows, out)?;
            if let Some(note) = note {
                writeln!(err, "note: {note}")?;
            }
        }
        Format::Json => report::write_dist_json(&dist, a.method, &rows, note, out)?,
        Format::Text => report::write_dist_text(&dist, a.method, &rows, note, out)?,
    }
    Ok(EXIT_OK)
}

/// `"raw = reduced"`, or just `"reduced"` when the raw fraction is already reduced.
fn fraction_chain(
    raw_num: &impl ToString,
    raw_den: &impl ToString,
    reduced: &ExactRatio,
) -> String {
    let raw = format!("{}/{}", raw_num.to_string(), raw_den.to_string());
    let reduced_text = reduced.to_string();
    if raw == reduced_text {
        raw
    } else {
        format!("{raw} = {reduced_text}")
    }
}

fn cmd_average(a: &AverageArgs, out: &mut dyn Write) -> CmdResult {
    if a.n == 0 {
        return Err(Failure::usage("average needs --n >= 1"));
    }
    let (num, den) = average_parts(a.n);
    let reduced = ExactRatio::from_counts(&num, &den);
    let decimal = reduced.to_decimal(a.precision);
    let closed = (3 * a.n as u128, a.n as u128 + 2);
    match a.format {
        Format::Text => {
            writeln!(out, "{} = {decimal}", fraction_chain(&num, &den, &reduced))?;
            writeln!(out, "3n/(n+2) = {}/{}", closed.0, closed.1)?;
        }
        Format::Csv => {
            writeln!(out, "n,numerator,denominator,reduced,decimal")?;
            writeln!(out, "{},{num},{den},{reduced},{decimal}", a.n)?;
        }
        Format::Json => {
            let value = serde_json::json!({
                "n": a.n,
                "numerator": num.to_string(),
                "denominator": den.to_string(),
                "reduced": reduced.to_string(),
                "decimal": decimal,
                "closed_form": format!("{}/{}", closed.0, closed.1),
                "version": VERSION,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&value).expect("json")
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_limit(a: &LimitArgs, out: &mut dyn Write) -> CmdResult {
    if a.k == 0 {
        return Err(Failure::usage("limit needs --k >= 1"));
    }
    let value = limit_fraction(a.k);
    let formula = limit_formula(a.k);
    debug_assert_eq!(value, formula);
    let den = num_bigint::BigUint::from(1u8) << (a.k + 1);
    writeln!(
        out,
        "{} = {}",
        fraction_chain(&a.k, &den, &value),
        value.to_decimal(a.precision)
    )?;
    Ok(EXIT_OK)
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if a.samples == 0 {
        return Err(Failure::usage("sample needs --samples >= 1"));
    }
    let mut sampler = Sampler::new(a.seed);
    let mut hits = vec![0usize; a.n + 1];
    for _ in 0..a.samples {
        hits[sampler.sample_spine(a.n)] += 1;
    }
    let exact = dist_recurrence(a.n);
    let rows = report::sample_rows(&exact, &hits, a.samples, a.precision);
    let note = (a.n == 0).then_some(SIZE_ZERO_NOTE);
    match a.format {
        Format::Csv => {
            report::write_sample_csv(&rows, out)?;
            if let Some(note) = note {
                writeln!(err, "note: {note}")?;
            }
        }
        Format::Json => report::write_sample_json(a, &rows, note, out)?,
        Format::Text => report::write_sample_text(a, &rows, note, out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let trees = enumerate_with_cap(a.n, a.cap)?;
    let mut out = io::BufWriter::new(out);
    for t in &trees {
        writeln!(out, "{}", t.encode())?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}
