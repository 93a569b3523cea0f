//! `fairshare` command-line tool.
//!
//! ```bash
//! fairshare credit --pattern 1,1,1
//! fairshare credit --authors 3 --position 3 --corresponding --oracle 1000000 --seed 7
//! fairshare score --roster roster.csv --publications pubs.csv --if-table if.csv
//! fairshare report --roster roster.csv --publications pubs.csv --if-table if.csv \
//!     --funding funding.csv --case black --control white --ratio 1
//! ```

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fairshare::ingest::DataFormat;
use fairshare::report::TableFormat;
use fairshare::AuthorGroupPattern;

mod commands;

#[derive(Parser)]
#[command(
    name = "fairshare",
    version,
    about = "Axiomatic co-author credit, productivity indices and funding parity"
)]
struct Cli {
    /// Input schema format, also used for machine-readable outputs
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Rendering of report tables
    #[arg(long, global = true, value_enum, default_value_t = Table::Text)]
    table: Table,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for matching and Monte Carlo
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for DataFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => DataFormat::Csv,
            Format::Json => DataFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Text,
    Csv,
    Json,
}

impl From<Table> for TableFormat {
    fn from(t: Table) -> Self {
        match t {
            Table::Text => TableFormat::Text,
            Table::Csv => TableFormat::Csv,
            Table::Json => TableFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a-index shares for a tie pattern or a byline
    Credit(CreditArgs),
    /// Score every roster member: papers, citations, Pr, Pc, Pc*IF
    Score(CorpusArgs),
    /// Match cases to controls on gender, degree, title, specialty and school
    Pair(PairArgs),
    /// Paired t-tests per stratum and feature
    Ttest(TtestArgs),
    /// Funding and project totals normalized by summed productivity
    Normalize(NormalizeArgs),
    /// Productivity comparison plus funding tables for a matched pool
    Report(ReportArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["pattern", "authors"])))]
pub struct CreditArgs {
    /// Comma-separated tie-group sizes, e.g. 1,2,1
    #[arg(long, conflicts_with_all = ["authors", "position"], value_parser = parse_pattern)]
    pattern: Option<AuthorGroupPattern>,

    /// Number of authors on the byline
    #[arg(long, requires = "position")]
    authors: Option<u32>,

    /// 1-based byline position of the author of interest
    #[arg(long, requires = "authors")]
    position: Option<u32>,

    /// The author of interest is a corresponding author
    #[arg(long)]
    corresponding: bool,

    /// Other corresponding-author positions, comma-separated
    #[arg(long, value_delimiter = ',')]
    corresponding_at: Vec<u32>,

    /// Explicit tie groups, e.g. "1,2;3;4"
    #[arg(long)]
    ties: Option<String>,

    /// Keep corresponding authors in their own byline positions
    #[arg(long)]
    no_merge: bool,

    /// Add a Monte Carlo estimate from this many candidate draws
    #[arg(long)]
    oracle: Option<u64>,

    /// Also list harmonic, fractional and inflated credit per author
    #[arg(long)]
    compare: bool,
}

#[derive(Args)]
pub struct CorpusArgs {
    #[arg(long)]
    roster: PathBuf,
    #[arg(long)]
    publications: PathBuf,
    #[arg(long)]
    if_table: PathBuf,
    #[arg(long)]
    funding: Option<PathBuf>,
}

#[derive(Args)]
pub struct PairingArgs {
    /// Group label of the cases
    #[arg(long = "case")]
    case_label: String,
    /// Group label of the controls
    #[arg(long = "control")]
    control_label: String,
    /// Controls per case
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    ratio: u8,
}

#[derive(Args)]
pub struct PairArgs {
    #[arg(long)]
    roster: PathBuf,
    #[command(flatten)]
    pairing: PairingArgs,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum By {
    Title,
    Tier,
    Gender,
    All,
}

#[derive(Args)]
pub struct TtestArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    pairing: PairingArgs,
    /// Strata to test; repeatable
    #[arg(long, value_enum, default_values_t = [By::All])]
    by: Vec<By>,
}

#[derive(Args)]
pub struct NormalizeArgs {
    /// Pre-aggregated group totals instead of a corpus
    #[arg(long, conflicts_with_all = ["roster", "publications", "if_table", "funding"])]
    aggregates: Option<PathBuf>,
    #[arg(long, requires_all = ["publications", "if_table", "funding"])]
    roster: Option<PathBuf>,
    #[arg(long)]
    publications: Option<PathBuf>,
    #[arg(long)]
    if_table: Option<PathBuf>,
    #[arg(long)]
    funding: Option<PathBuf>,
    #[arg(long = "case")]
    case_label: String,
    #[arg(long = "control")]
    control_label: String,
    /// Controls per case when pairing a corpus
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    ratio: u8,
}

#[derive(Args)]
pub struct ReportArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    pairing: PairingArgs,
}

fn parse_pattern(s: &str) -> Result<AuthorGroupPattern, String> {
    s.parse().map_err(|e: fairshare::Error| e.to_string())
}

/// Shared settings handed to every subcommand.
pub struct Settings {
    pub format: DataFormat,
    pub table: TableFormat,
    pub seed: u64,
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Settings {
        format: cli.format.into(),
        table: cli.table.into(),
        seed: cli.seed,
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.command {
        Command::Credit(args) => commands::credit(&ctx, &args, &mut out)?,
        Command::Score(args) => commands::score(&ctx, &args, &mut out)?,
        Command::Pair(args) => commands::pair(&ctx, &args, &mut out)?,
        Command::Ttest(args) => commands::ttest(&ctx, &args, &mut out)?,
        Command::Normalize(args) => commands::normalize(&ctx, &args, &mut out)?,
        Command::Report(args) => commands::report(&ctx, &args, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
