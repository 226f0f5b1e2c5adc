use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use duality_cli::check::{parse_relations, run_check, CheckConfig};
use duality_cli::error::CliError;
use duality_cli::example::{run_example, ExampleName};
use duality_cli::output::{Format, Table};
use duality_cli::parallel::worker_count;
use duality_cli::summarize::summarize_file;
use duality_cli::sweep::{parse_fix, run_sweep, GridSpec};

/// Verification campaigns for n-path interferometer complementarity relations.
#[derive(Parser)]
#[command(name = "duality-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo check of one or more relations on random inputs.
    Check {
        /// Relation name(s), comma separated, or 'all'.
        #[arg(long)]
        relation: String,
        /// Path count.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Quantum memory dimension (1 = no memory).
        #[arg(long = "memory-dim", default_value_t = 2)]
        memory_dim: usize,
        /// Number of random trials per relation.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Base seed; trial t uses stream t of this seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample pure input states instead of Ginibre mixed ones.
        #[arg(long)]
        pure: bool,
        /// Evaluate path distinguishability with the POVM optimizer instead
        /// of the closed-form bound.
        #[arg(long)]
        oracle: bool,
        /// Fix the Ginibre rank instead of sampling it per trial.
        #[arg(long)]
        rank: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Reproduce a worked family against its closed forms on a grid.
    Example {
        /// example1, werner, or threepath.
        #[arg(long)]
        name: String,
        /// Grid steps per axis (comma separated), e.g. 51,51,5.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<usize>>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Sweep a family's parameters and emit full report rows.
    Sweep {
        /// example1, werner, or threepath.
        #[arg(long)]
        family: String,
        /// Swept axis as param=start:stop:steps (repeatable).
        #[arg(long = "grid")]
        grids: Vec<String>,
        /// Pinned parameter as param=value (repeatable).
        #[arg(long = "fix")]
        fixed: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Summarize a previously written check/sweep artifact.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

fn parse_format(s: &str) -> Result<Format, CliError> {
    Format::parse(s)
        .ok_or_else(|| CliError::usage(format!("unknown format '{s}'; use csv or json")))
}

/// Writes the table to the path (or stdout) and the summary lines to the
/// channel that does not carry the table.
fn emit(
    table: &Table,
    format: Format,
    output: Option<&PathBuf>,
    summary_lines: &[String],
) -> Result<(), CliError> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for line in summary_lines {
                writeln!(out, "{line}")?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            table.write(format, &mut out)?;
            out.flush()?;
            let stderr = io::stderr();
            let mut err = stderr.lock();
            for line in summary_lines {
                writeln!(err, "{line}")?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check {
            relation,
            n,
            memory_dim,
            trials,
            seed,
            pure,
            oracle,
            rank,
            output,
            format,
        } => {
            let format = parse_format(&format)?;
            let cfg = CheckConfig {
                relations: parse_relations(&relation)?,
                n,
                memory_dim,
                trials,
                seed,
                pure,
                oracle,
                rank,
                threads: worker_count(),
            };
            let outcome = run_check(&cfg)?;
            let lines: Vec<String> = outcome.summaries.iter().map(|s| s.line()).collect();
            emit(&outcome.table, format, output.as_ref(), &lines)?;
            Ok(if outcome.violations() == 0 { 0 } else { 1 })
        }
        Command::Example {
            name,
            steps,
            output,
            format,
        } => {
            let format = parse_format(&format)?;
            let name = ExampleName::parse(&name)
                .ok_or_else(|| CliError::usage(format!("unknown example '{name}'")))?;
            let outcome = run_example(name, steps)?;
            let ok = outcome.max_disagreement < 1e-9;
            let line = format!(
                "example rows={} max_disagreement={:e} within_tolerance={ok}",
                outcome.table.rows.len(),
                outcome.max_disagreement
            );
            emit(&outcome.table, format, output.as_ref(), &[line])?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Sweep {
            family,
            grids,
            fixed,
            output,
            format,
        } => {
            let format = parse_format(&format)?;
            let family = ExampleName::parse(&family)
                .ok_or_else(|| CliError::usage(format!("unknown family '{family}'")))?;
            let grids: Vec<GridSpec> = grids
                .iter()
                .map(|g| GridSpec::parse(g))
                .collect::<Result<_, _>>()?;
            let fixed: Vec<(String, f64)> = fixed
                .iter()
                .map(|f| parse_fix(f))
                .collect::<Result<_, _>>()?;
            let outcome = run_sweep(family, &grids, &fixed)?;
            let line = format!(
                "sweep rows={} violations={}",
                outcome.table.rows.len(),
                outcome.violations
            );
            emit(&outcome.table, format, output.as_ref(), &[line])?;
            Ok(if outcome.violations == 0 { 0 } else { 1 })
        }
        Command::Report { input } => {
            let summary = summarize_file(&input)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for line in summary.lines() {
                writeln!(out, "{line}")?;
            }
            Ok(if summary.violations() == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
