//! Command-line layer: configuration, output formats and command runners.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{parse_config, RunConfig};
pub use error::CliError;

/// Sizes the global worker pool from `ESDLAB_THREADS`, capped at the
/// available parallelism.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("ESDLAB_THREADS") else {
        return Ok(());
    };
    let requested: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("ESDLAB_THREADS must be a positive integer, got '{value}'")))?;
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    // a pool may already exist when embedded; the hint is then ignored
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(requested.min(available))
        .build_global();
    Ok(())
}
