//! Command-line front end: file ingestion, single-sample tests, critical
//! value tables and size/power studies.

pub mod args;
pub mod ingest;
pub mod report;
pub mod run;

pub use args::{Cli, Command, Format};
pub use ingest::{ingest_lifetimes, parse_lifetimes, IngestError};
pub use report::{Body, Metadata, Report};
pub use run::execute;
