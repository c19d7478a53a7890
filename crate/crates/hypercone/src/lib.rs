//! File formats and the command-line front end for `hypercone-core`.

pub mod cli;
pub mod formats;
