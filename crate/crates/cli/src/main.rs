use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use optcoef_cli::{parse_config, run, Domain, Experiment, PenaltyChoice, Settings};

/// Optimal-coefficient experiments for −div(a∇u) = f.
#[derive(Debug, Parser)]
#[command(name = "optcoef", version)]
struct Args {
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// `key = value` file; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    domain: Option<Domain>,
    #[arg(long, value_enum)]
    penalty: Option<PenaltyChoice>,
    /// Cells per side of the square mesh.
    #[arg(long)]
    n: Option<usize>,
    /// Ring spacing of the disk mesh.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Unused: every driver is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read config {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => String::new(),
    };
    let flags = Settings {
        experiment: args.experiment,
        domain: args.domain,
        penalty: args.penalty,
        n: args.n,
        h: args.h,
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        tau: args.tau,
        epsilon: args.epsilon,
        tol: args.tol,
        max_iters: args.max_iters,
        seed: args.seed,
        out_dir: args.out_dir,
    };
    let config = match parse_config(&text, flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(out) => {
            print!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
