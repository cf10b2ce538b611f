use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use expander_cli::{run, CliError, Command, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "expander", version, about = "Expansion experiments for SL_d over residue rings")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Defining polynomial coefficients, constant term first (e.g. 1,0,1).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    f: Option<Vec<i64>>,
    /// Moduli, e.g. 5,7,15 or 5..53 for the primes in a range.
    #[arg(long, global = true)]
    q: Option<String>,
    /// Generator file.
    #[arg(long, global = true)]
    gens: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    lmax: Option<usize>,
    /// dense or iterative.
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    subgroup: Option<String>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
}

fn main_inner(args: Args) -> Result<i32, CliError> {
    let base = match &args.config {
        Some(path) => RunConfig::from_json(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    let cfg = base.merged(RunConfig {
        f: args.f,
        q: args.q,
        gens: args.gens,
        k: args.k,
        lmax: args.lmax,
        method: args.method,
        seed: args.seed,
        out: args.out,
        format: args.format,
        subgroup: args.subgroup,
        epsilon: args.epsilon,
    });
    let report = run(args.command, &cfg)?;
    match &cfg.out {
        Some(path) => fs::write(path, &report.body)?,
        None => print!("{}", report.body),
    }
    eprintln!("{}", report.summary);
    Ok(report.outcome.code())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
