//! Command line front end and file formats for the expansion engine.
//!
//! The core crate stays free of IO; everything that touches files,
//! stdout or process exit codes lives here.

pub mod cli;
pub mod dot;
pub mod json;
