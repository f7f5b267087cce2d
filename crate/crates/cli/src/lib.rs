//! Command-line front end for `cascade-core`.
//!
//! [`config::parse_config`] layers flags, `CASCADE_*` environment variables
//! and a `key=value` file over the defaults; [`run::execute`] runs the
//! subcommand and writes a CSV table or a PGM/PPM image.

pub mod config;
pub mod run;

pub use config::{parse_config, Command, ConfigError, Format, RunConfig, Target};
pub use run::{compute, execute, Artifact, RunError};
