use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use geu_cli::commands::{self, AaCommand, CheckKind, LotteryCommand, RepresentMode};
use geu_cli::{fuzz, load, CliError, Format, Report, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};

/// Evaluate decision rules, build GEU representations and fuzz the theory.
#[derive(Parser)]
#[command(name = "geu", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rule on an act document.
    Eval { file: PathBuf, rule: String },
    /// Build a GEU representation of a rule and report the verdicts.
    Represent {
        file: PathBuf,
        rule: String,
        #[arg(value_enum)]
        mode: RepresentMode,
    },
    /// Check a property of a rule on an act document.
    Check {
        #[arg(value_enum)]
        property: CheckKind,
        file: PathBuf,
        rule: String,
    },
    /// Translate between acts and lotteries.
    Lottery {
        #[arg(value_enum)]
        action: LotteryCommand,
        file: PathBuf,
    },
    /// Anscombe-Aumann documents.
    Aa {
        #[arg(value_enum)]
        action: AaCommand,
        file: PathBuf,
    },
    /// Run the seeded property suites.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        suite: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Eval { file, rule } => commands::eval(&load(file)?, rule),
        Command::Represent { file, rule, mode } => commands::represent(&load(file)?, rule, *mode),
        Command::Check { property, file, rule } => commands::check(&load(file)?, rule, *property),
        Command::Lottery { action, file } => commands::lottery(&load(file)?, *action),
        Command::Aa { action, file } => commands::aa(&load(file)?, *action),
        Command::Fuzz { seed, count, suite } => fuzz::fuzz(*seed, *count, suite.as_deref()).map_err(CliError::Usage),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.ok {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
