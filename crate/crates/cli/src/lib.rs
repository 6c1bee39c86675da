//! Experiment driver for the logiq simulator: sweeps, figure recipes and
//! cross-checks.

pub mod compare;
pub mod error;
pub mod oracle_check;
pub mod profile;
pub mod recipes;
pub mod route_report;
pub mod spec;
pub mod sweep;

pub use error::{CliError, Result};
