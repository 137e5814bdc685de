//! Std companion to `qpow-core`: chain persistence, CSV output, a timing harness, a
//! parallel nonce search and the `qpow` command line.

pub mod bench;
pub mod chainfile;
pub mod cli;
pub mod csv;
pub mod miner;
