//! Experiment runner for the redaction library: configs, synthetic trials,
//! reports, sweeps and the acceptance criteria.

pub mod config;
pub mod criteria;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod report;
pub mod sweep;
pub mod verify;
