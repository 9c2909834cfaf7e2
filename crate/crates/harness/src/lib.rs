//! Scenario runner, canned reproduction targets and file formats for the
//! statedist laboratory. The binary in this crate exposes the `classical`,
//! `quantum`, `topology`, `reproduce` and `emit-plots` subcommands.

pub mod config;
pub mod families;
pub mod report;
pub mod reproduce;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("report error: {0}")]
    Report(#[from] serde_json::Error),
    #[error(transparent)]
    Classical(#[from] statedist::classical::ClassicalError),
    #[error(transparent)]
    Quantum(#[from] statedist::quantum::QuantumError),
    #[error(transparent)]
    Topology(#[from] statedist::topology::TopologyError),
    #[error(transparent)]
    NumLin(#[from] statedist::numlin::NumLinError),
}
