//! File formats, suite runs and the command line for `locality-core`.

pub mod cli;
pub mod format;
pub mod io;
pub mod mutation;
pub mod suite;

pub use io::{load, save, LoadError, Object};
pub use suite::{run_suite, run_suite_on, RunConfig, Suite, SuiteReport};
