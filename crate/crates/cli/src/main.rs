use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use abscat_cli::commands::{cmd_asymptote, cmd_compare, cmd_evolve, cmd_scatter, cmd_verify, Outcome};
use abscat_cli::config::RunConfig;
use abscat_cli::{exit_code, CliError, EXIT_DEGENERATE, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "abscat", version, about = "Scattering data, long-time asymptotics and PDE checks for the AB system")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "AB_OUT_DIR", default_value = "abscat-out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip the PDE-based verification criteria.
    #[arg(long, global = true)]
    fast: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection coefficient of the initial data on the spectral grid.
    Scatter,
    /// Leading-order asymptotics at the requested (x, t) samples.
    Asymptote,
    /// Evolve the PDE and write snapshots plus an isospectrality report.
    Evolve,
    /// Evolve and compare A along a ray with the leading term.
    Compare,
    /// Run the acceptance criteria.
    Verify,
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if cli.fast {
        cfg.verify.fast = true;
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Scatter => cmd_scatter(&cfg, &cli.out),
        Command::Asymptote => cmd_asymptote(&cfg, &cli.out),
        Command::Evolve => cmd_evolve(&cfg, &cli.out),
        Command::Compare => cmd_compare(&cfg, &cli.out),
        Command::Verify => cmd_verify(&cfg, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(if o.degenerate { EXIT_DEGENERATE as u8 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
