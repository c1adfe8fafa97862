use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use orbifold_hkr::cli::{self, exit, CliError, CommandName, OutputFormat};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Quotient,
    Wps,
    Circle,
    Gamma,
}

impl From<Command> for CommandName {
    fn from(c: Command) -> Self {
        match c {
            Command::Quotient => CommandName::Quotient,
            Command::Wps => CommandName::Wps,
            Command::Circle => CommandName::Circle,
            Command::Gamma => CommandName::Gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Exact Hochschild dimensions of orbifolds and the cell-level circle checks.
///
/// The job is a JSON document read from --spec or standard input.
/// Exit codes: 0 ok, 1 internal error, 2 input error, 3 group cap exceeded,
/// 4 oracle disagreement.
#[derive(Debug, Parser)]
#[command(name = "orbifold-hkr", version)]
struct Args {
    command: Command,
    /// Job file; standard input when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Weight truncation, overriding the document.
    #[arg(long)]
    t_max: Option<usize>,
    /// Cross-check every reported cell against the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn read_input(args: &Args) -> Result<String, CliError> {
    match &args.spec {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let stdin = io::stdin();
            if stdin.is_terminal() {
                return Err(CliError::Io("no --spec given and standard input is a terminal".into()));
            }
            let mut text = String::new();
            stdin.lock().read_to_string(&mut text).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(text)
        }
    }
}

fn execute(args: &Args) -> Result<i32, CliError> {
    let text = read_input(args)?;
    let mut job = cli::parse_jobspec_with_default(&text, Some(args.command.into()))?;
    if let Some(t) = args.t_max {
        job.t_max = t;
    }
    job.oracle |= args.oracle;
    if let Some(f) = args.format {
        job.output = match f {
            Format::Json => OutputFormat::Json,
            Format::Table => OutputFormat::Table,
        };
    }
    let out = cli::run(&job)?;
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(cli::render(&out.report, job.output).as_bytes())
        .and_then(|()| stdout.flush())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = execute(&args).unwrap_or_else(|e| {
        eprintln!("orbifold-hkr: {e}");
        e.exit_code()
    });
    debug_assert!(
        [exit::OK, exit::INTERNAL, exit::INPUT, exit::CAP_EXCEEDED, exit::ORACLE_DISAGREEMENT].contains(&code)
    );
    ExitCode::from(code as u8)
}
