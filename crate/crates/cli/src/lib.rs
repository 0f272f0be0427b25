pub mod commands;
pub mod config;
pub mod error;

pub use commands::{Format, Outcome};
pub use config::InstanceConfig;
pub use error::CliError;
