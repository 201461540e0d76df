//! `maxface`: batch front-end for the singular Björling solver.
//!
//! Exit codes: 0 success, 2 schema violation, 3 invalid data or failed
//! validity gate, 4 numeric or write failure.

mod error;
mod manifest;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maxface::presets::all_presets;

use crate::manifest::Overrides;

const SCHEMA: &str = include_str!("schema.json");

#[derive(Debug, Parser)]
#[command(
    name = "maxface",
    version,
    about = "Singular Björling problem for maxfaces"
)]
struct Cli {
    /// Relative zero-test tolerance (overrides the manifest).
    #[arg(long, global = true, value_name = "X")]
    tol_rel: Option<f64>,
    /// Absolute zero-test tolerance (overrides the manifest).
    #[arg(long, global = true, value_name = "X")]
    tol_abs: Option<f64>,
    /// Worker threads for grid work.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the tasks of a JSON manifest.
    Run { manifest: PathBuf },
    /// List the built-in data sets.
    Presets,
    /// Print the manifest JSON Schema.
    Schema,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match cli.command {
        Command::Presets => {
            for (name, d) in all_presets() {
                let iv = d.interval();
                println!("{name}\t[{}, {}]\tbase {}", iv.a, iv.b, d.base());
            }
            ExitCode::SUCCESS
        }
        Command::Schema => {
            print!("{SCHEMA}");
            ExitCode::SUCCESS
        }
        Command::Run { manifest } => {
            let overrides = Overrides {
                tol_rel: cli.tol_rel,
                tol_abs: cli.tol_abs,
            };
            let plan = match manifest::load(&manifest, overrides) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code());
                }
            };
            println!(
                "data: {}; tolerance: {}",
                plan.preset.as_deref().unwrap_or("inline"),
                run::describe_tolerance(&plan.tolerance)
            );
            let results = run::run_plan(&plan);
            for r in &results {
                match r {
                    Ok(o) => {
                        println!("{}: ok", o.context);
                        for p in &o.written {
                            println!("  wrote {}", p.display());
                        }
                    }
                    Err(e) => eprintln!("error: {e}"),
                }
            }
            ExitCode::from(run::exit_code(&results))
        }
    }
}
