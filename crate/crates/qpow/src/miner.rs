//! Nonce search over a thread pool.
//!
//! Each block draws nonces from its own ChaCha8 stream (`seed`, stream = block index).
//! Candidates are evaluated in batches and the earliest passing nonce in draw order wins,
//! so the mined block does not depend on the number of threads.

use qpow_core::chain::{mine_block, MinedBlock, MiningConfig};
use qpow_core::{Block, Error, Exact};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Nonce generator for the block that will follow `prev`.
pub fn nonce_stream(seed: u64, prev: &Block) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(prev.index + 1);
    rng
}

/// Exact-backend mining with `jobs` worker threads. `jobs <= 1` runs inline.
pub fn mine_exact(
    prev: &Block,
    payload: &str,
    config: &MiningConfig,
    seed: u64,
    timestamp: u64,
    jobs: usize,
) -> Result<MinedBlock, Error> {
    let mut nonces = nonce_stream(seed, prev);
    if jobs <= 1 {
        return mine_block(prev, payload, config, &mut Exact, &mut nonces, timestamp);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let batch = (jobs * 8) as u64;
    let mut tried = 0u64;
    while tried < config.max_attempts {
        let take = batch.min(config.max_attempts - tried);
        let candidates: Vec<u32> = (0..take).map(|_| nonces.next_u32()).collect();
        let found = pool.install(|| {
            candidates
                .par_iter()
                .enumerate()
                .map(|(i, &nonce)| {
                    Block::candidate(prev, payload, nonce, config.n_qubits, timestamp, &mut Exact)
                        .map(|b| (i, b))
                })
                .filter(|r| r.as_ref().map_or(true, |(_, b)| config.difficulty.is_met_by(&b.pow_hash)))
                .min_by_key(|r| r.as_ref().map_or(0, |(i, _)| *i))
        });
        if let Some(result) = found {
            let (i, block) = result?;
            return Ok(MinedBlock { block, attempts: tried + i as u64 + 1 });
        }
        tried += take;
    }
    Err(Error::AttemptCapExceeded { attempts: config.max_attempts })
}
