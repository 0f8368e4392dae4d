//! `pitaron-lab`: runs JSON-described experiments and writes CSV tables plus
//! a summary document per config.

// `!(x > y)` comparisons deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod demos;
mod error;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::{load_config, parse_config, ExperimentConfig};
use crate::demos::Demo;
use crate::error::CliError;
use crate::output::{output_paths, write_outputs};

#[derive(Debug, Parser)]
#[command(name = "pitaron-lab", version, about = "Unitarized quantum evolution experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one or more experiment configs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Worker threads for independent configs.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Directory prefixed to relative output paths.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in config.
    Demo {
        name: Demo,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the config instead of running it.
        #[arg(long)]
        print_config: bool,
    },
}

fn execute(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let start = Instant::now();
    let (table, summary) = experiments::run_experiment(cfg)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let doc: Value = json!({
        "kind": cfg.kind.as_str(),
        "params": cfg.params_echo,
        "seed": cfg.seed,
        "results": Value::Object(summary.results),
        "warnings": summary.warnings,
        "wall_time_ms": wall_time_ms,
    });
    let paths = output_paths(out, &cfg.output_path);
    write_outputs(&paths, &table, &doc)?;
    Ok(paths.csv)
}

fn run_one(source: &str, load: impl FnOnce() -> Result<ExperimentConfig, CliError>, out: Option<&Path>) -> i32 {
    let outcome = load().and_then(|cfg| execute(&cfg, out));
    match outcome {
        Ok(csv) => {
            eprintln!("{source}: wrote {}", csv.display());
            0
        }
        Err(e) => {
            eprintln!("{source}: {e}");
            e.exit_code()
        }
    }
}

/// Runs configs on up to `jobs` threads; the exit code is the largest one.
fn run_all(configs: &[PathBuf], jobs: usize, out: Option<&Path>) -> i32 {
    let next = AtomicUsize::new(0);
    let worst = Mutex::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(configs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = configs.get(i) else { break };
                let code = run_one(&path.display().to_string(), || load_config(path), out);
                let mut w = worst.lock().expect("no worker panics while holding the lock");
                *w = (*w).max(code);
            });
        }
    });
    worst.into_inner().expect("workers joined")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { configs, jobs, out } => run_all(&configs, usize::from(jobs), out.as_deref()),
        Command::Demo { name, out, print_config } => {
            if print_config {
                println!("{}", name.config());
                0
            } else {
                run_one(name.name(), || parse_config(name.config()), out.as_deref())
            }
        }
    };
    ExitCode::from(code as u8)
}
