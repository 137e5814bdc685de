//! Quantum proof-of-work core.
//!
//! The pipeline hashes a block's text with SHA3-256 and slices the digest into 64 quads.
//! Each quad is used as the angle of one rotation gate in a fixed n-qubit ansatz. The ansatz
//! is simulated exactly, and the most probable basis state is folded back into a second
//! SHA3-256 digest. That digest is the proof-of-work output, checked against a
//! leading-zero difficulty.
//!
//! This crate is `no_std` (it needs `alloc`). It holds only deterministic computation.
//! Callers supply clocks, file IO and timing.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod chain;
pub mod circuit;
pub mod error;
pub mod hashing;
pub mod noise;
pub mod simulator;

pub use analysis::{AdvantageModel, AdvantageRow, Crossover, CrossoverCriterion, LinearFit};
pub use chain::{Block, Difficulty, FailureReason, MinedBlock, MiningConfig, QpowTrace};
pub use circuit::{Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use hashing::{encode_angles, sha3_256, AngleVector, Digest256};
pub use noise::{accuracy_estimate, CnotCount, NoiseParams, NoisePreset, NoisyBackend};
pub use simulator::{simulate, Backend, BasisOutcome, Exact, Histogram, Statevector};
