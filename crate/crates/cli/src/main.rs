//! `diskdil`: distortion functionals, inequality checks, and reports for
//! planar Sobolev homeomorphisms of the unit disk.

// Domain guards are written as negated comparisons (`!(x > 0.0)`) so that
// NaN operands fail validation instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod pipeline;
mod report;
mod svg;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "diskdil",
    version,
    about = "Distortion functionals and area bounds for disk homeomorphisms",
    long_about = "Computes the p-angular dilatation, circle functionals, curve lengths, and \
                  image areas of planar Sobolev homeomorphisms of the unit disk, and verifies \
                  the distortion inequalities that connect them. Outputs are deterministic \
                  CSV/JSON tables and optional SVG charts."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IngestArgs {
    /// Sampled-map file (.csv with header r,theta,re,im, or .json)
    path: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate L, S (both methods), S', and delta_p over the radius grid
    Profile(config::RunArgs),
    /// Run the selected inequality checks; exit 0 iff every gating check passes
    Check(config::RunArgs),
    /// Tabulate the origin (Schwarz-type) functional on a shrinking grid
    Schwarz(config::RunArgs),
    /// Parse a sampled-map file and report grid regularity
    IngestVerify(IngestArgs),
    /// Run the built-in verification sweep and branch-seam probes
    Selftest,
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Profile(args) => {
            let config = config::resolve(&args, config::GridRole::Standard)?;
            pipeline::run_profile(&config)
        }
        Command::Check(args) => {
            let config = config::resolve(&args, config::GridRole::Standard)?;
            pipeline::run_check(&config)
        }
        Command::Schwarz(args) => {
            let config = config::resolve(&args, config::GridRole::Origin)?;
            pipeline::run_schwarz(&config)
        }
        Command::IngestVerify(args) => pipeline::run_ingest_verify(&args.path),
        Command::Selftest => pipeline::run_selftest(),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            1
        }
    };
    std::process::exit(code);
}
