//! Command-line runner for the `linbandit-core` simulations: TOML
//! configurations and presets, parallel trials, CSV and JSON output.

pub mod cli;
pub mod config;
mod error;
pub mod fmt;
pub mod io;
pub mod output;
pub mod presets;
pub mod runner;

pub use error::{core_exit_code, RunError, EXIT_INVARIANT, EXIT_OK, EXIT_SOLVER, EXIT_VALIDATION};
