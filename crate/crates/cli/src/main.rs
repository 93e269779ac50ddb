use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use charsum_cli::commands::{
    format_lemma, format_resonator_info, format_summary, resonator_info, run_scan, verify_lemma,
};
use charsum_cli::config::{Format, ScanConfig};
use charsum_cli::CliError;
use clap::{Parser, Subcommand};

/// Accepts plain integers as well as exact scientific forms like `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) {
        Ok(v as u64)
    } else {
        Err(format!("not a nonnegative integer: {s:?}"))
    }
}

#[derive(Parser)]
#[command(
    name = "charsum",
    version,
    about = "Quadratic character sums with multiplicative coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan X < |d| <= 2X and certify max |D_N| >= sqrt(S2/S1).
    Scan {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value_t = 0.009)]
        delta: f64,
        /// Defaults to delta/100.
        #[arg(long)]
        epsilon: Option<f64>,
        /// one | pm:SEED | phases:PATH
        #[arg(long = "f", default_value = "one")]
        coefficients: String,
        /// Resonator length; defaults to X^(1/2-delta)/N^2.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Compare exact family sums of chi_d(n) over |d| <= X with their main terms.
    VerifyLemma {
        #[arg(long = "n", value_delimiter = ',', required = true, value_parser = parse_count)]
        ns: Vec<u64>,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Maximum relative deviation accepted for square n.
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long)]
        include_unit_discriminant: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Print the Kronecker symbol (d/n).
    Kronecker {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        n: u64,
    },
    /// Resonator window, support and correlation ratio for a length Y.
    ResonatorInfo {
        #[arg(long)]
        y: f64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Scan {
            x,
            n,
            delta,
            epsilon,
            coefficients,
            y,
            threads,
            out,
            format,
        } => {
            let mut config = ScanConfig::new(x, n, delta, coefficients.parse()?);
            config.eps = epsilon;
            config.y_override = y;
            config.threads = threads;
            config.output_path = out;
            config.format = format;
            let record = run_scan(&config)?;
            print!("{}", format_summary(&record));
            Ok(if record.summary.inequality_holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::VerifyLemma {
            ns,
            x,
            epsilon,
            threshold,
            include_unit_discriminant,
            threads,
        } => {
            let check = verify_lemma(
                &ns,
                x,
                epsilon,
                threshold,
                include_unit_discriminant,
                threads,
            )?;
            print!("{}", format_lemma(&check));
            Ok(if check.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Kronecker { d, n } => {
            println!("{}", charsum_core::arith::kronecker(d, n));
            Ok(ExitCode::SUCCESS)
        }
        Command::ResonatorInfo { y, n } => {
            print!("{}", format_resonator_info(&resonator_info(y, n)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).context("charsum") {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
