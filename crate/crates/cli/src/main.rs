use std::path::PathBuf;
use std::process::ExitCode;

use chain_cli::{run, OutputFormat, RunOptions, TaskKind};
use clap::Parser;

/// Exact and WKB analysis of inhomogeneous free-fermion chains.
#[derive(Debug, Parser)]
#[command(name = "chain", version)]
struct Args {
    /// Task to run.
    #[arg(value_enum)]
    task: TaskKind,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Omit timestamps and timings so reruns are byte-identical.
    #[arg(long)]
    deterministic: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        out_dir: args.out,
        format: args.format,
        deterministic: args.deterministic,
    };
    match run(args.task, &args.config, &opts) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("chain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
