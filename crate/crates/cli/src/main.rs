use std::process::ExitCode;

use esdlab_cli::{commands, configure_threads, parse_config, CliError};

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("esdlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn try_main() -> Result<(), CliError> {
    configure_threads()?;
    let config = parse_config(std::env::args())?;
    commands::run(&config, &mut std::io::stdout().lock())
}
