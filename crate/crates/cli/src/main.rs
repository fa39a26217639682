//! `jlp`: tables, Bayes factors, constructions and decision runs from the
//! command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jlp_core::Budget;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "jlp", version, about = "Bayes factors and calibration tables around the Jeffreys-Lindley paradox")]
struct Cli {
    /// Output format; JSON unless stated otherwise per command.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regenerate one of the historical tables.
    Table {
        #[arg(value_enum)]
        name: TableName,
    },
    /// Evaluate a single Bayes factor.
    Bf {
        #[command(subcommand)]
        subject: BfSubject,
    },
    /// Search for data that realise a stated conflict.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Error-rate trade-offs and Monte Carlo mistake counts.
    Decision {
        #[command(subcommand)]
        action: DecisionAction,
    },
    /// Check regenerated values against the published ones.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    /// Two proportions: maximum odds and critical difference.
    #[value(name = "jeffreys1935")]
    Jeffreys1935,
    /// Least-squares critical ratios.
    #[value(name = "jeffreys1936")]
    Jeffreys1936,
    /// t-test K at the two-sided 5% point.
    #[value(name = "jeffreys1938t")]
    Jeffreys1938t,
    /// Uniformity test: K, a0√n and χ² at K = 1.
    #[value(name = "jeffreys1938chi2")]
    Jeffreys1938chi2,
}

#[derive(Debug, Subcommand)]
pub enum BfSubject {
    /// Two binomial samples; prints K = P(q)/P(~q).
    TwoProp {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        x2: u64,
        #[arg(long)]
        y2: u64,
        /// Use the large-sample form instead of the exact factorial one.
        #[arg(long)]
        approx: bool,
        /// Sample size below which the large-sample form warns.
        #[arg(long, default_value_t = jlp_core::proportions::APPROX_MIN_SAMPLE)]
        min_sample: u64,
    },
    /// Normal mean with known standard error against a uniform alternative.
    #[command(allow_negative_numbers = true)]
    Z {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        n: u64,
        /// Width of the uniform prior under the alternative.
        #[arg(long)]
        m: f64,
    },
    /// Jeffreys's approximate t-test K.
    #[command(allow_negative_numbers = true)]
    TJeffreys {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: u64,
    },
    /// One-sample t-test with a Cauchy prior on effect size.
    #[command(allow_negative_numbers = true)]
    TCauchy {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        scale: f64,
    },
    /// z-test with a N(0, g0) peri-null against N(0, g1).
    #[command(allow_negative_numbers = true)]
    Perinull {
        #[arg(long)]
        z: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        g0: f64,
        #[arg(long)]
        g1: f64,
    },
    /// Uniformity test for a chance distribution.
    #[command(allow_negative_numbers = true)]
    Uniformity {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a0: f64,
        #[arg(long, default_value_t = jlp_core::gaussian::UNIFORMITY_C_FIRST)]
        c: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// (t, n) with a given posterior mass below zero and a given BF10.
    #[command(name = "figure1")]
    Figure1 {
        #[arg(long)]
        mass_neg: f64,
        #[arg(long)]
        bf10: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        scale: f64,
    },
    /// Smallest n at which a result significant at alpha leaves P(H0 | data)
    /// at the target.
    Lindley {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        posterior: f64,
        /// Width of the prior interval under the alternative.
        #[arg(long = "I")]
        i: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        prior_h0: f64,
    },
    /// Good's coin: n with sample proportion 0.5 + ε/7 reaching a two-sided p.
    Simplissimus {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        p: f64,
        /// Allow n for which n (0.5 + ε/7) is not a whole number.
        #[arg(long)]
        any_n: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum DecisionAction {
    /// Optimal critical value, α and β over a grid of sample sizes.
    Sweep {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Seeded Monte Carlo count of Type I and Type II mistakes.
    Mc {
        #[arg(long)]
        n: u64,
        /// Effect-size variance under H1.
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 0.5)]
        prior_h0: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// alpha:A, bf:K or weighted:LAMBDA.
        #[arg(long, value_parser = commands::parse_rule)]
        rule: commands::RuleArg,
        /// Prior variance assumed by the bf rule; defaults to --g.
        #[arg(long)]
        g_model: Option<f64>,
        /// Draw effects from U(-h, h) instead of N(0, g).
        #[arg(long)]
        uniform_half_width: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReportAction {
    /// Run every published-value check; Markdown by default.
    Reproduce {
        #[arg(long, value_enum, hide = true)]
        mutate: Option<MutateArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutateArg {
    TExponent,
}

/// Exit codes.
const EXIT_REPRO_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] jlp_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(jlp_core::Error::Domain { .. }) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(_) => EXIT_NUMERIC,
        }
    }
}

/// `JLP_EVAL_BUDGET` is either `N` (quadrature evaluations) or
/// `quad=N,search=M` with either part optional.
fn budget_from_env() -> Result<Budget, CliError> {
    match std::env::var("JLP_EVAL_BUDGET") {
        Ok(spec) => parse_budget(&spec),
        Err(std::env::VarError::NotPresent) => Ok(Budget::default()),
        Err(e) => Err(CliError::Usage(format!("JLP_EVAL_BUDGET: {e}"))),
    }
}

fn parse_budget(spec: &str) -> Result<Budget, CliError> {
    let bad = || CliError::Usage(format!("JLP_EVAL_BUDGET must be N or quad=N,search=M, got {spec:?}"));
    let mut budget = Budget::default();
    let spec = spec.trim();
    if let Ok(n) = spec.parse::<usize>() {
        budget.quad_evaluations = n;
        return Ok(budget);
    }
    for part in spec.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(bad)?;
        let value: usize = value.trim().parse().map_err(|_| bad())?;
        match key.trim() {
            "quad" => budget.quad_evaluations = value,
            "search" => budget.search_steps = value,
            _ => return Err(bad()),
        }
    }
    Ok(budget)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let budget = budget_from_env()?;
    let (out, default_format, code) = match cli.command {
        Command::Table { name } => (commands::table(name)?, Format::Json, 0),
        Command::Bf { subject } => (commands::bf(subject, &budget)?, Format::Json, 0),
        Command::Construct { kind } => (commands::construct(kind, &budget)?, Format::Json, 0),
        Command::Decision { action } => (commands::decision(action, &budget)?, Format::Json, 0),
        Command::Report { action: ReportAction::Reproduce { mutate } } => {
            let (out, report) = commands::reproduce(mutate)?;
            for r in report.failures() {
                eprintln!(
                    "FAIL {} {}: paper {} computed {} (delta {:+.6}, tol {} {:?})",
                    r.table_id,
                    r.row_key,
                    r.paper_value,
                    r.computed_value,
                    r.delta(),
                    r.tolerance,
                    r.mode
                );
            }
            let code = if report.all_passed() { 0 } else { EXIT_REPRO_FAIL };
            (out, Format::Md, code)
        }
    };
    let text = out.render(cli.format.unwrap_or(default_format));
    match cli.out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("jlp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
