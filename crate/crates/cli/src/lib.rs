//! Library side of the `saddlescope` binary: settings, exit codes, SVG
//! output, subcommand bodies and the example suites.

pub mod commands;
pub mod config;
pub mod exit;
pub mod suites;
pub mod svg;
