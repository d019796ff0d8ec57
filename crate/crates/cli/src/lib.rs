//! Command-line front end for `sixvertex`: parallel enumeration, count tables,
//! partition-function evaluation and the verification suites.

pub mod angle;
pub mod app;
pub mod count;
pub mod parallel;
pub mod report;
pub mod suites;

pub use app::{run, Outcome};
pub use report::VerifyReport;
pub use suites::{run_verify, Suite, VerifyOptions};
