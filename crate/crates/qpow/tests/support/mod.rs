//! Test-only oracles.

pub mod dense;
