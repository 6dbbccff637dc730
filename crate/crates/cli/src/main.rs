//! `ggl`: batch front-end for the ggl-core verification suites.
//!
//! Exit status is 0 when every check passes, 1 on any violation and 2 on a
//! usage or configuration error.

mod output;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Table};
use suites::{BoundsScale, Context, CHECK_NAMES};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ggl_core::Error),
}

impl From<ggl_core::Error> for CliError {
    fn from(e: ggl_core::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ggl",
    version,
    about = "Parity-restricted Goldbach verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Size parameter; its meaning depends on the subcommand.
    #[arg(long, global = true)]
    limit: Option<u64>,

    /// Number of points in the uniform α grid.
    #[arg(long = "alpha-grid", global = true)]
    alpha_grid: Option<usize>,

    /// Seed for every randomized sample (SplitMix64).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the relative tolerance of a check, e.g. `lemma4=1e-2`.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VAL", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Thue–Morse recurrences, splitting, balance and truncation.
    Parity,
    /// Prime counts by parity class (`counts`) or arithmetic identities (`identities`).
    Sieve {
        #[arg(long, default_value = "counts")]
        suite: String,
    },
    /// Exponential sums: gelfond_identity, corollary1, vaughan, theorem1 or all.
    Expsum {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Spectrum of the truncated character.
    Spectrum {
        /// Largest k examined.
        #[arg(long, default_value_t = 10)]
        k: u32,
        /// parseval, product, corollary3, corollary4, hierarchy or all.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Inequalities: lemma1, lemma2, lemma4, corollary2, gallagher or all.
    Bounds {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest Q for lemma2 and lemma4.
        #[arg(long)]
        q: Option<u32>,
        /// Largest k for gallagher.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Ternary Goldbach counts: ratio, circle, oracle or convergence.
    Goldbach {
        #[arg(long, default_value = "ratio")]
        suite: String,
        #[arg(long, value_delimiter = ',', default_value = "1001,10001,100001")]
        checkpoints: Vec<u64>,
    },
    /// Reduced pass over every suite.
    Report,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VAL, got `{s}`"))?;
    if !CHECK_NAMES.contains(&key) {
        return Err(format!("unknown check `{key}`"));
    }
    let value: f64 = value
        .parse()
        .map_err(|e| format!("bad tolerance `{value}`: {e}"))?;
    if !(value.is_finite() && value >= 0.0) {
        return Err(format!(
            "tolerance must be finite and non-negative, got {value}"
        ));
    }
    Ok((key.to_string(), value))
}

fn run(cli: &Cli) -> Result<Table, CliError> {
    if cli.limit == Some(0) || cli.alpha_grid == Some(0) {
        return Err(CliError::Usage(
            "--limit and --alpha-grid must be positive".into(),
        ));
    }
    let ctx = Context {
        limit: cli.limit,
        alpha_grid: cli.alpha_grid,
        seed: cli.seed,
        tolerances: cli.tolerances.iter().cloned().collect::<BTreeMap<_, _>>(),
    };
    match &cli.command {
        Command::Parity => suites::parity(&ctx),
        Command::Sieve { suite } => suites::sieve(&ctx, suite),
        Command::Expsum { suite } => suites::expsum(&ctx, suite),
        Command::Spectrum { k, check } => suites::spectrum(&ctx, *k, check),
        Command::Bounds { suite, q, k } => {
            let scale = BoundsScale {
                q_max: *q,
                k_max: *k,
            };
            suites::bounds(&ctx, suite, &scale)
        }
        Command::Goldbach { suite, checkpoints } => suites::goldbach(&ctx, suite, checkpoints),
        Command::Report => suites::report(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let table = match run(&cli) {
        Ok(table) => table,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Core(e @ ggl_core::Error::Quadrature { .. })) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = table.emit(cli.format, cli.out.as_deref()) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(2);
    }
    if table.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "{} check(s) failed: {}",
            table.failures.len(),
            table.failures.join(", ")
        );
        ExitCode::from(1)
    }
}
