//! Command-line front end: documents, reports and subcommands.

pub mod app;
pub mod document;
pub mod error;
pub mod published;
pub mod report;

pub use app::run;
