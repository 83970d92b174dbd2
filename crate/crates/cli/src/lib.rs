//! Scenario files, parameter sweeps and the `sgcov` command line.

pub mod app;
pub mod config;
pub mod output;
pub mod sweep;
