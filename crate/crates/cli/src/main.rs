use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hyperspectra_cli::args::{Cli, Command};
use hyperspectra_cli::{
    cmd_bounds, cmd_gen, cmd_spectral, cmd_suite, cmd_verify, CliError, Output, Status,
};

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Gen {
            spec,
            seed,
            out,
            json,
        } => cmd_gen(&spec, seed, out.as_deref(), json),
        Command::Spectral(args) => cmd_spectral(&args.into_config()?),
        Command::Bounds(args) => cmd_bounds(&args.into_config()?),
        Command::Verify(args) => cmd_verify(&args.into_config()?),
        Command::Suite(args) => {
            let (cfg, format, timestamp) = args.into_config()?;
            cmd_suite(&cfg, format, timestamp)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().write_all(out.stderr.as_bytes());
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::from(&e).code())
        }
    }
}
