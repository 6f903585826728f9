use clap::Parser;
use pgsplash::cli::{self, emit, parse_range, run_suite, ReportFormat, RunConfig, Suite};
use std::process::ExitCode;

/// Batch verifier for splashes of subgeometries and linear sets on
/// projective lines over small field towers.
#[derive(Parser, Debug)]
#[command(name = "pgsplash", version, about, disable_help_subcommand = true)]
struct Args {
    /// Subfield order q: a prime power, or an inclusive range "a..b"
    #[arg(long, default_value = "2")]
    q: String,
    /// Extension degree n, or an inclusive range "a..b"
    #[arg(long, default_value = "3")]
    n: String,
    /// Rank r, or an inclusive range "a..b"
    #[arg(long, default_value = "3")]
    r: String,
    /// Comma-separated suites: splash-linearity, weight,
    /// club-characterization, uniqueness, counting, section5,
    /// infrastructure, or all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Seed for every randomized selection; fully determines the report
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel enumeration (0 = all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output path (default stdout); the PGSPLASH_OUT environment variable
    /// overrides this
    #[arg(long)]
    out: Option<String>,
    /// Report format
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
    /// Node limit for equivalence searches
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

fn build_config(args: &Args) -> Result<RunConfig, cli::CliError> {
    let q = parse_range(&args.q)?;
    let n = parse_range(&args.n)?
        .into_iter()
        .map(|v| v as usize)
        .collect();
    let r = parse_range(&args.r)?
        .into_iter()
        .map(|v| v as usize)
        .collect();
    let suites = Suite::parse(&args.suite)?;
    let format = match args.format.as_str() {
        "csv" => ReportFormat::Csv,
        _ => ReportFormat::Json,
    };
    let out = std::env::var("PGSPLASH_OUT").ok().or_else(|| args.out.clone());
    let config = RunConfig {
        q,
        n,
        r,
        suites,
        seed: args.seed,
        workers: args.workers,
        out,
        format,
        budget: args.budget,
    };
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse(); // exits with status 2 on unknown flags
    let config = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pgsplash: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("pgsplash: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match emit(&report, config.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("pgsplash: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(path) = &config.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("pgsplash: cannot write {path}: {e}");
            return ExitCode::from(1);
        }
    } else {
        println!("{text}");
    }
    eprintln!(
        "pgsplash: {} checks, {} passed, {} failed, {} skipped",
        report.summary.total, report.summary.passed, report.summary.failed, report.summary.skipped
    );
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
