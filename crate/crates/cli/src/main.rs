use clap::Parser;
use std::process::ExitCode;
use zmlab_cli::config::{parse_config, Cli, CliError};
use zmlab_cli::report::{csv_path, emit_report};

fn main() -> ExitCode {
    let (cmd, flags) = Cli::parse().command.split();
    match try_main(cmd, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("zmlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn try_main(cmd: zmlab_cli::config::Command, flags: zmlab_cli::config::Flags) -> Result<bool, CliError> {
    let cfg = parse_config(cmd, flags)?;
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let run = zmlab_cli::run(&cfg)?;
    print!("{}", run.document.table());
    if let Some(s) = run.cache {
        eprintln!("zeta cache: {} hits, {} misses, {} entries ({} loaded)", s.hits, s.misses, s.entries, s.loaded);
    }
    if let Some(out) = &cfg.out {
        emit_report(&run.document, out)?;
        eprintln!("wrote {} and {}", out.display(), csv_path(out).display());
    }
    if !run.document.pass {
        eprintln!("zmlab: {}", CliError::Tolerance("tolerance check failed".into()));
    }
    Ok(run.document.pass)
}
