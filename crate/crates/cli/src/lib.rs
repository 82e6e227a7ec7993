//! Command-line front end for `cyclespin`: run configuration, output
//! formats, brute-force oracles and the verification suites.

pub mod commands;
pub mod config;
pub mod oracle;
pub mod output;
pub mod suites;
