mod ainf_cmd;
mod io;
mod multicomplex_cmd;
mod prelie_cmd;
mod report;
mod trees_cmd;

use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser)]
#[command(name = "prelie", version, about = "Exact pre-Lie deformation theory computations")]
struct Cli {
    /// Truncation: series order, tower weight or A∞ arity.
    #[arg(long, global = true, visible_alias = "order", value_name = "N")]
    truncation: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the computed artifact here instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Suppress the verification report (text format only).
    #[arg(short, long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rooted trees, levelizations and weights.
    Trees {
        #[command(subcommand)]
        verb: trees_cmd::Verb,
    },
    /// Series in the free pre-Lie algebra.
    Prelie {
        #[command(subcommand)]
        verb: prelie_cmd::Verb,
    },
    /// Operator towers on a graded space.
    Multicomplex {
        #[command(subcommand)]
        verb: multicomplex_cmd::Verb,
    },
    /// A∞ structures, homotopy transfer and gauge triviality.
    Ainf {
        #[command(subcommand)]
        verb: ainf_cmd::Verb,
    },
}

fn run(cli: &Cli) -> prelie::Result<Report> {
    match &cli.command {
        Command::Trees { verb } => trees_cmd::run(verb),
        Command::Prelie { verb } => prelie_cmd::run(verb, cli.truncation),
        Command::Multicomplex { verb } => multicomplex_cmd::run(verb, cli.truncation),
        Command::Ainf { verb } => ainf_cmd::run(verb, cli.truncation),
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let to_file = cli.output.is_some();
    let mut out = std::io::stdout().lock();
    if let Some(path) = &cli.output {
        if let Some(text) = report.artifact_text() {
            std::fs::write(path, text)?;
        }
    }
    match cli.format {
        Format::Json => {
            let v = report.render_json(!to_file);
            writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap_or_default())?;
        }
        Format::Text if cli.quiet => {
            if !to_file {
                if let Some(text) = report.artifact_text() {
                    write!(out, "{text}")?;
                }
            }
        }
        Format::Text => write!(out, "{}", report.render_text(!to_file))?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &report).or_else(|e| if e.kind() == ErrorKind::BrokenPipe { Ok(()) } else { Err(e) }) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
