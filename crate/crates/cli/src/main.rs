mod certify;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "rt-lab", version, about = "Ramsey-Turan constructions and weighted-graph certificates")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "RT_LAB_THREADS")]
    threads: Option<usize>,
    /// Flat `key = value` file of defaults for the subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-class graph on the complex sphere.
    #[command(args_override_self = true)]
    GenCbe(commands::GenCbe),
    /// Multipartite graph of Borsuk-graph classes.
    #[command(args_override_self = true)]
    GenMbe(commands::GenMbe),
    /// Clique, density and p-independence statistics of an edge list.
    #[command(args_override_self = true)]
    Analyze(commands::Analyze),
    /// Run a certification suite and print a JSON report.
    #[command(args_override_self = true)]
    Certify(certify::Certify),
    /// Exact value of the density formula for given p, q.
    #[command(args_override_self = true)]
    RhoStar(RhoStarArgs),
    /// Cartesian parameter grid, one CSV row per cell.
    #[command(args_override_self = true)]
    Sweep(commands::Sweep),
}

#[derive(Args)]
struct RhoStarArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
}

/// Outcome of a command that ran to completion without a usage error.
pub enum Outcome {
    Pass,
    Fail,
}

/// Usage and validation problems; exit code 2.
pub struct Usage(pub String);

impl From<rtlab::Error> for Usage {
    fn from(e: rtlab::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Usage {
    fn from(e: serde_json::Error) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::GenCbe(a) => commands::gen_cbe(a),
        Command::GenMbe(a) => commands::gen_mbe(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Certify(a) => certify::run(a),
        Command::RhoStar(a) => rho_star(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn rho_star(a: RhoStarArgs) -> Result<Outcome, Usage> {
    let r = rtlab::analysis::rho_star(a.p, a.q)?;
    println!("{}", r.value);
    Ok(Outcome::Pass)
}
