use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use radiomap_cli::commands::{cmd_grid, cmd_sweep, cmd_validate, startup_checks, FaultArg, RunFlags};

#[derive(Parser)]
#[command(name = "radiomap", version, about = "Radio map interpolation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spatial RMS error of each method over a range of D/Xc.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Per-point RMS error surface and its distribution for one method.
    Grid {
        #[arg(long)]
        config: PathBuf,
        /// D/Xc.
        #[arg(long)]
        ratio: f64,
        #[arg(long)]
        method: String,
        #[arg(long)]
        out: PathBuf,
        /// Histogram bins for dist.csv.
        #[arg(long)]
        bins: Option<usize>,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run the built-in oracle checks.
    Validate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = startup_checks(640.0).and_then(|_| match &cli.command {
        Command::Sweep { config, out, flags } => cmd_sweep(config, out, flags),
        Command::Grid {
            config,
            ratio,
            method,
            out,
            bins,
            flags,
        } => cmd_grid(config, *ratio, method, out, *bins, flags),
        Command::Validate { out, inject_fault } => cmd_validate(out, *inject_fault),
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
