//! Command line front end, file formats and the acceptance suite.

pub mod cli;
pub mod fixtures;
pub mod formats;
pub mod suites;
