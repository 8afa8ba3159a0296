//! File formats, the connected-sum verification scenario and its JSON report.
//!
//! The `reeb-kit` binary is a thin layer over this crate.

pub mod config;
pub mod error;
pub mod formats;
pub mod ledger_file;
pub mod report;
pub mod scenario;
pub mod trace;

pub use config::ScenarioConfig;
pub use error::KitError;
pub use report::{Record, Status, VerificationReport};
pub use scenario::run_connect_sum_verification;
