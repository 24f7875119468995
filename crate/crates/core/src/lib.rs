pub mod concepts;
pub mod domain;
pub mod error;
pub mod metrics;
pub mod rejectron;
pub mod synthetic;
pub mod urejectron;
