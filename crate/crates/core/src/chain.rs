//! qPoW hash composition, blocks, mining and verification.
//!
//! The hashed text of a block is `decimal(nonce) ++ payload ++ hex(prev_hash)`. Its
//! proof-of-work digest is
//!
//! ```text
//! h1 = SHA3-256(text)
//! b  = outcome of the ansatz parametrized by h1 (n bits, qubit 0 first)
//! h2 = SHA3-256(h1 ++ pack(b))
//! ```
//!
//! `pack` stores the n bits MSB-first in `ceil(n/8)` bytes, zero-padded on the right.
//! The timestamp is metadata and is not hashed.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;

use crate::circuit::{build_ansatz, Circuit};
use crate::error::{Error, Result};
use crate::hashing::{encode_angles, sha3_256, AngleVector, Digest256, DIGEST_LEN};
use crate::simulator::{bitstring, Backend, Exact};

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1 << 20;
pub const GENESIS_PAYLOAD: &str = "genesis";

/// Required number of leading `'0'` hex characters in a proof-of-work digest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Difficulty(u32);

impl Difficulty {
    pub fn new(leading_zero_hex_chars: u32) -> Result<Self> {
        if leading_zero_hex_chars > 64 {
            return Err(Error::InvalidDifficulty(leading_zero_hex_chars));
        }
        Ok(Difficulty(leading_zero_hex_chars))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_met_by(self, digest: &Digest256) -> bool {
        digest.leading_zero_nibbles() >= self.0
    }
}

pub fn check_difficulty(digest: &Digest256, d: Difficulty) -> bool {
    d.is_met_by(digest)
}

/// `decimal(nonce) ++ payload ++ hex(prev_hash)` as UTF-8.
pub fn serialize_text(nonce: u32, payload: &str, prev_hash: &Digest256) -> Vec<u8> {
    let mut text = nonce.to_string().into_bytes();
    text.reserve(payload.len() + 2 * DIGEST_LEN);
    text.extend_from_slice(payload.as_bytes());
    text.extend_from_slice(prev_hash.to_hex().as_bytes());
    text
}

/// Packs the low `n_qubits` bits of `index` (qubit 0 = MSB) into `ceil(n/8)` bytes,
/// MSB-first, zero-padded on the right.
pub fn pack_outcome(index: usize, n_qubits: usize) -> Vec<u8> {
    let mut out = alloc::vec![0u8; n_qubits.div_ceil(8)];
    for i in 0..n_qubits {
        if index >> (n_qubits - 1 - i) & 1 == 1 {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// Every intermediate value of one qPoW evaluation.
#[derive(Clone, Debug)]
pub struct QpowTrace {
    pub h1: Digest256,
    pub angles: AngleVector,
    pub circuit: Circuit,
    pub outcome: usize,
    pub h2: Digest256,
}

impl QpowTrace {
    pub fn bits(&self) -> String {
        bitstring(self.outcome, self.circuit.n_qubits())
    }
}

pub fn qpow_trace<B: Backend + ?Sized>(text: &[u8], n_qubits: usize, backend: &mut B) -> Result<QpowTrace> {
    let h1 = sha3_256(text);
    let angles = encode_angles(&h1);
    let circuit = build_ansatz(&angles, n_qubits)?;
    let outcome = backend.evaluate(&circuit);
    let mut second = Vec::with_capacity(DIGEST_LEN + n_qubits.div_ceil(8));
    second.extend_from_slice(h1.as_bytes());
    second.extend_from_slice(&pack_outcome(outcome, n_qubits));
    let h2 = sha3_256(&second);
    Ok(QpowTrace { h1, angles, circuit, outcome, h2 })
}

pub fn qpow_hash<B: Backend + ?Sized>(text: &[u8], n_qubits: usize, backend: &mut B) -> Result<Digest256> {
    Ok(qpow_trace(text, n_qubits, backend)?.h2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub index: u64,
    /// Seconds since the Unix epoch. Not covered by the proof of work.
    pub timestamp: u64,
    pub prev_hash: Digest256,
    pub payload: String,
    pub nonce: u32,
    pub n_qubits: usize,
    pub pow_hash: Digest256,
}

impl Block {
    /// Block 0: payload `"genesis"`, nonce 0, all-zero previous hash, hashed exactly.
    pub fn genesis(n_qubits: usize, timestamp: u64) -> Result<Block> {
        let text = serialize_text(0, GENESIS_PAYLOAD, &Digest256::ZERO);
        Ok(Block {
            index: 0,
            timestamp,
            prev_hash: Digest256::ZERO,
            payload: GENESIS_PAYLOAD.into(),
            nonce: 0,
            n_qubits,
            pow_hash: qpow_hash(&text, n_qubits, &mut Exact)?,
        })
    }

    /// A successor of `prev` carrying `nonce`, hashed with `backend`. No difficulty check.
    pub fn candidate<B: Backend + ?Sized>(
        prev: &Block,
        payload: &str,
        nonce: u32,
        n_qubits: usize,
        timestamp: u64,
        backend: &mut B,
    ) -> Result<Block> {
        let text = serialize_text(nonce, payload, &prev.pow_hash);
        Ok(Block {
            index: prev.index + 1,
            timestamp,
            prev_hash: prev.pow_hash,
            payload: payload.into(),
            nonce,
            n_qubits,
            pow_hash: qpow_hash(&text, n_qubits, backend)?,
        })
    }

    pub fn text(&self) -> Vec<u8> {
        serialize_text(self.nonce, &self.payload, &self.prev_hash)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MiningConfig {
    pub difficulty: Difficulty,
    pub n_qubits: usize,
    pub max_attempts: u64,
}

impl MiningConfig {
    pub fn new(difficulty: Difficulty, n_qubits: usize) -> Self {
        MiningConfig { difficulty, n_qubits, max_attempts: DEFAULT_MAX_ATTEMPTS }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinedBlock {
    pub block: Block,
    /// Nonces tried, including the winning one.
    pub attempts: u64,
}

/// Draws uniform 32-bit nonces from `nonces` until the proof-of-work digest meets the
/// difficulty.
pub fn mine_block<B: Backend + ?Sized, R: RngCore + ?Sized>(
    prev: &Block,
    payload: &str,
    config: &MiningConfig,
    backend: &mut B,
    nonces: &mut R,
    timestamp: u64,
) -> Result<MinedBlock> {
    for attempt in 1..=config.max_attempts {
        let nonce = nonces.next_u32();
        let block = Block::candidate(prev, payload, nonce, config.n_qubits, timestamp, backend)?;
        if config.difficulty.is_met_by(&block.pow_hash) {
            return Ok(MinedBlock { block, attempts: attempt });
        }
    }
    Err(Error::AttemptCapExceeded { attempts: config.max_attempts })
}

/// Why a block failed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    EmptyChain,
    NotGenesis,
    IndexNotConsecutive { expected: u64, found: u64 },
    PrevHashMismatch,
    DifficultyNotMet,
    InvalidQubitCount,
    PowHashMismatch,
}

impl FailureReason {
    /// Stable kebab-case code for logs and scripts.
    pub fn code(self) -> &'static str {
        match self {
            FailureReason::EmptyChain => "empty-chain",
            FailureReason::NotGenesis => "not-genesis",
            FailureReason::IndexNotConsecutive { .. } => "index-not-consecutive",
            FailureReason::PrevHashMismatch => "prev-hash-mismatch",
            FailureReason::DifficultyNotMet => "difficulty-not-met",
            FailureReason::InvalidQubitCount => "invalid-qubit-count",
            FailureReason::PowHashMismatch => "pow-hash-mismatch",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::IndexNotConsecutive { expected, found } => {
                write!(f, "{} (expected {expected}, found {found})", self.code())
            }
            _ => f.write_str(self.code()),
        }
    }
}

/// Position in the chain and reason of the first failing block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainFailure {
    pub position: usize,
    pub reason: FailureReason,
}

impl fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "block {}: {}", self.position, self.reason)
    }
}

/// Checks the link to `prev`, the difficulty, and recomputes the proof of work with the
/// exact backend. A valid block costs exactly one simulation.
pub fn verify_block(block: &Block, prev: &Block, d: Difficulty) -> core::result::Result<(), FailureReason> {
    verify_block_with(block, prev, d, &mut Exact)
}

pub fn verify_block_with<B: Backend + ?Sized>(
    block: &Block,
    prev: &Block,
    d: Difficulty,
    backend: &mut B,
) -> core::result::Result<(), FailureReason> {
    if block.prev_hash != prev.pow_hash {
        return Err(FailureReason::PrevHashMismatch);
    }
    if !d.is_met_by(&block.pow_hash) {
        return Err(FailureReason::DifficultyNotMet);
    }
    recompute(block, backend)
}

fn recompute<B: Backend + ?Sized>(block: &Block, backend: &mut B) -> core::result::Result<(), FailureReason> {
    let pow =
        qpow_hash(&block.text(), block.n_qubits, backend).map_err(|_| FailureReason::InvalidQubitCount)?;
    if pow == block.pow_hash {
        Ok(())
    } else {
        Err(FailureReason::PowHashMismatch)
    }
}

/// Genesis shape (index 0, zero previous hash) and its recomputed hash. Difficulty does
/// not apply to genesis.
pub fn verify_genesis(genesis: &Block) -> core::result::Result<(), FailureReason> {
    if genesis.index != 0 || genesis.prev_hash != Digest256::ZERO {
        return Err(FailureReason::NotGenesis);
    }
    recompute(genesis, &mut Exact)
}

/// [`verify_block`] plus the consecutive-index rule.
pub fn verify_successor(
    prev: &Block,
    block: &Block,
    d: Difficulty,
) -> core::result::Result<(), FailureReason> {
    if block.index != prev.index + 1 {
        return Err(FailureReason::IndexNotConsecutive { expected: prev.index + 1, found: block.index });
    }
    verify_block(block, prev, d)
}

/// Stops at the first failing block.
pub fn verify_chain(chain: &[Block], d: Difficulty) -> core::result::Result<(), ChainFailure> {
    let genesis = chain.first().ok_or(ChainFailure { position: 0, reason: FailureReason::EmptyChain })?;
    verify_genesis(genesis).map_err(|reason| ChainFailure { position: 0, reason })?;
    for (i, pair) in chain.windows(2).enumerate() {
        verify_successor(&pair[0], &pair[1], d).map_err(|reason| ChainFailure { position: i + 1, reason })?;
    }
    Ok(())
}
