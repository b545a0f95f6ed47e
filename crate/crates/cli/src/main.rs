use clap::Parser;
use cyclab_cli::{dispatch, exit_code, Cli, RunConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<cyclab_cli::CliError>()
                .map_or(3, |c| c.exit_code());
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let config = RunConfig::from_cli(cli)?;
    let mut outcome = dispatch(&config)?;
    let paths = outcome.write(&config.out_dir)?;
    for v in outcome.report.failures() {
        match v.tolerance {
            Some(t) => eprintln!("invariant failed: {} = {:e} (tolerance {t:e})", v.name, v.value),
            None => eprintln!("invariant failed: {}", v.name),
        }
    }
    for p in paths {
        println!("{}", p.display());
    }
    Ok(exit_code(&outcome))
}
