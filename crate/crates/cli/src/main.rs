use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use contracta::green::{Method, RelationKind};
use contracta::map::FamilyTag;
use contracta::verify::CheckId;

mod commands;
mod config;

use commands::Outcome;
use config::{Guards, MAX_N_VAR};

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "contracta", version, about = "Semigroups of contraction maps on a finite chain")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Guard configuration file (default: ./contracta.toml if present).
    #[arg(long, global = true, env = "CONTRACTA_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the elements of a family with idempotent and regular counts.
    Enumerate {
        #[arg(long, value_parser = parse::<FamilyTag>)]
        family: FamilyTag,
        #[arg(long)]
        n: usize,
    },
    /// Kernel, transversals, maximum refinement and regularity of one map.
    Analyze {
        #[arg(long)]
        n: usize,
        /// Image word such as [1,2,2,3].
        #[arg(long)]
        map: String,
    },
    /// Classes of a Green or starred relation.
    Relations {
        #[arg(long, value_parser = parse::<FamilyTag>)]
        family: FamilyTag,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse::<RelationKind>)]
        relation: RelationKind,
        #[arg(long, value_parser = parse::<Method>, default_value = "oracle")]
        method: Method,
    },
    /// Run named theorem checks.
    Verify {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse::<CheckId>)]
        check: Vec<CheckId>,
        /// Restrict to one family (default: every family the check covers).
        #[arg(long, value_parser = parse::<FamilyTag>)]
        family: Option<FamilyTag>,
        #[arg(long)]
        n: usize,
        /// Include wall-clock time per check in the reports.
        #[arg(long)]
        timing: bool,
    },
    /// Rees quotient by the height ideal, with its inverse-semigroup report.
    Rees {
        #[arg(long, value_parser = parse::<FamilyTag>)]
        family: FamilyTag,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
    /// Search n = 1..=N for the first violation of a check.
    Counterexample {
        #[arg(long, value_parser = parse::<CheckId>)]
        check: CheckId,
        #[arg(long, value_parser = parse::<FamilyTag>)]
        family: Option<FamilyTag>,
        #[arg(long)]
        n: usize,
    },
}

fn parse<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let env_cap = std::env::var(MAX_N_VAR).ok();
    let guards = Guards::load(cli.config.as_deref(), env_cap.as_deref())?;
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Enumerate { family, n } => commands::cmd_enumerate(*family, *n, &guards),
        Command::Analyze { n, map } => commands::cmd_analyze(*n, map, &guards),
        Command::Relations { family, n, relation, method } => {
            commands::cmd_relations(*family, *n, *relation, *method, &guards)
        }
        Command::Verify { check, family, n, timing } => commands::cmd_verify(check, *family, *n, *timing, &guards),
        Command::Rees { family, n, p } => commands::cmd_rees(*family, *n, *p, &guards),
        Command::Counterexample { check, family, n } => commands::cmd_counterexample(*check, *family, *n, &guards),
    }
}

fn emit(outcome: &Outcome, format: Output) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Output::Json => writeln!(out, "{}", outcome.json)?,
        Output::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
            for r in &outcome.csv {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|o| emit(&o, cli.output).map(|()| o.success)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
