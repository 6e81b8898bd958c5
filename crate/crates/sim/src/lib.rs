//! Sweeps, file formats and the command-line interface on top of `blockade-core`.
//!
//! A sweep is a [`SweepConfig`] (parsed from TOML or taken from [`presets`]) evaluated
//! point by point into [`ResultRecord`]s, which [`output`] writes as CSV or JSON lines.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod record;
pub mod selfcheck;
pub mod sweep;

pub use config::{load_config, parse_config, SweepConfig};
pub use error::{Result, SimError};
pub use record::ResultRecord;
pub use sweep::run_sweep;
