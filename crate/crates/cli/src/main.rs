use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use rht_cli::{run, CliError, Command, Flags, DEFAULT_MAX_DEGREE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    /// d² = 0, nilmanifold shape, coalgebra laws, randomized algebra laws
    Check,
    /// Cohomology of the model in the requested degrees
    Cohomology,
    /// Degree-1 basis and δ matrix of the mapping-space model
    Fsmodel,
    /// The detective map κ
    Kappa,
    /// Extendability of the symplectic class for the given classifying data
    Extendable,
    /// Dimension of the extendable fibrations over S²
    ModuliDim,
    /// Extendability for a nilmanifold fibre
    NilExtendable,
}

#[derive(Debug, Parser)]
#[command(
    name = "rht",
    version,
    about = "Exact rational models and symplectic extension criteria"
)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Model file; standard input when absent
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    deg: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    from: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<i32>,
    /// Print an indented listing instead of JSON
    #[arg(long)]
    text: bool,
    /// Seed for the randomized checks of `check`
    #[arg(long)]
    seed: Option<u64>,
}

fn max_degree() -> Result<i32, CliError> {
    match std::env::var("RHT_MAX_DEGREE") {
        Ok(s) => s
            .trim()
            .parse::<i32>()
            .ok()
            .filter(|&n| n >= 0)
            .ok_or_else(|| {
                CliError::Input(format!(
                    "RHT_MAX_DEGREE must be a non-negative integer, got `{s}`"
                ))
            }),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn main_inner(cli: Cli) -> Result<String, CliError> {
    let (text, source) = match &cli.input {
        Some(path) => (
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            (s, "<stdin>".to_string())
        }
    };
    let doc = rht_core::dsl::parse(&text).map_err(|d| CliError::Input(format!("{source}: {d}")))?;
    let command = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Cohomology => Command::Cohomology,
        Cmd::Fsmodel => Command::FsModel,
        Cmd::Kappa => Command::Kappa,
        Cmd::Extendable => Command::Extendable,
        Cmd::ModuliDim => Command::ModuliDim,
        Cmd::NilExtendable => Command::NilExtendable,
    };
    let flags = Flags {
        deg: cli.deg,
        from: cli.from,
        to: cli.to,
        seed: cli.seed,
        max_degree: max_degree()?,
    };
    let report = run(command, &doc, &flags)?;
    Ok(if cli.text {
        report.to_text()
    } else {
        report.to_json()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rht: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
