use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nems_tlr::cli::{run, Command};
use nems_tlr::config::RunConfig;

#[derive(Clone, Copy, ValueEnum)]
enum Sub {
    Params,
    Current,
    Entropy,
    Cat,
    Classical,
    Verify,
}

/// Resonator-NEMS simulations. Exit status: 0 ok, 1 a verify check failed, 2 bad input.
#[derive(Parser)]
#[command(name = "sim", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// `key = value` configuration file
    #[arg(long)]
    config: PathBuf,
    /// Directory for the CSV output
    #[arg(long)]
    out: PathBuf,
    /// Fail when θ₀/κ₂ or |θ|/κ₂ reaches 0.1
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = match args.command {
        Sub::Params => Command::Params,
        Sub::Current => Command::Current,
        Sub::Entropy => Command::Entropy,
        Sub::Cat => Command::Cat,
        Sub::Classical => Command::Classical,
        Sub::Verify => Command::Verify,
    };
    let result = RunConfig::load(&args.config).and_then(|mut cfg| {
        cfg.readout.strict |= args.strict;
        run(cmd, &cfg, &args.out)
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("sim: verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("sim: {e}");
            ExitCode::from(2)
        }
    }
}
