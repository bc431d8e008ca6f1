//! Configuration-driven harness around `chain_core`: runs one task on a
//! profile and writes plot-ready CSV or JSON tables.

pub mod catalog;
pub mod config;
pub mod error;
pub mod table;
pub mod tasks;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use config::{OutputFormat, RunConfig, TaskKind};
pub use error::CliError;
use table::{write_tables, Header, Table};

/// Output options shared by every task.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub deterministic: bool,
}

/// Environment variable capping the number of concurrently run targets.
pub const THREADS_ENV: &str = "CHAIN_NUM_THREADS";

/// Runs `task` on the configuration at `config_path`; returns written files.
pub fn run(
    task: TaskKind,
    config_path: &Path,
    opts: &RunOptions,
) -> Result<Vec<PathBuf>, CliError> {
    let cfg = RunConfig::load(config_path)?;
    run_config(task, &cfg, opts)
}

pub fn run_config(
    task: TaskKind,
    cfg: &RunConfig,
    opts: &RunOptions,
) -> Result<Vec<PathBuf>, CliError> {
    if task == TaskKind::Reproduce {
        return reproduce(cfg, opts);
    }
    let chain = cfg.chain()?;
    let p = &cfg.task;
    let tables: Vec<Table> = match task {
        TaskKind::Spectrum => tasks::spectrum(&chain)?,
        TaskKind::Density => tasks::density(&chain, p)?,
        TaskKind::FillingCurve => tasks::filling_curve(&chain, p)?,
        TaskKind::Wells => tasks::wells(&chain, p)?,
        TaskKind::Envelope => tasks::envelope(&chain, p)?,
        TaskKind::Frequencies => tasks::frequencies(&chain, p)?,
        TaskKind::Compare => tasks::compare(&chain, p, opts.deterministic)?,
        TaskKind::Reproduce => unreachable!(),
    };
    let header = Header {
        task: task.name().to_string(),
        config: cfg.echo.clone(),
        deterministic: opts.deterministic,
    };
    write_tables(&opts.out_dir, &tables, &header, opts.format)
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs the selected targets concurrently, each into `out_dir/<target>`.
fn reproduce(cfg: &RunConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let targets = match &cfg.task.figures {
        Some(names) if !names.is_empty() => names
            .iter()
            .map(|n| catalog::find(n))
            .collect::<Result<Vec<_>, _>>()?,
        _ => catalog::reproduce_catalog(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<PathBuf>, CliError>> = pool.install(|| {
        targets
            .par_iter()
            .map(|t| {
                let tables = t.run(&cfg.task)?;
                let header = Header {
                    task: format!("reproduce/{}", t.name),
                    config: cfg.echo.clone(),
                    deterministic: opts.deterministic,
                };
                write_tables(&opts.out_dir.join(t.name), &tables, &header, opts.format)
            })
            .collect()
    });
    let mut paths = Vec::new();
    for r in results {
        paths.extend(r?);
    }
    Ok(paths)
}
