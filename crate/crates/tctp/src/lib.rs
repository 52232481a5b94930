//! Files, benchmark suites and the `tctp` command line on top of `tctp-core`.
//!
//! Instances are JSON objects `{variant, m, T, costs, probs}`; testing
//! probabilities are `{num, den}` pairs and search likelihoods are integer
//! weights. Integers too large for 64 bits are written as strings.

pub mod bench;
pub mod cli;
pub mod error;
pub mod files;

pub use error::CliError;
