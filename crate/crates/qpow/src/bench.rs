//! Wall-clock scaling of the full qPoW circuit simulation.

use std::hint::black_box;
use std::ops::RangeInclusive;
use std::time::Instant;

use qpow_core::analysis::{fit_log10_slope, median, LinearFit};
use qpow_core::circuit::build_ansatz;
use qpow_core::simulator::{most_probable_state, simulate};
use qpow_core::{encode_angles, Digest256};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// 2^28 amplitudes take 4 GiB; wider registers are refused before allocating.
pub const MAX_BENCH_QUBITS: usize = 28;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("qubit range {min}..={max} must lie within 2..={MAX_BENCH_QUBITS}")]
    Range { min: usize, max: usize },
    #[error("repetitions must be at least 1")]
    ZeroReps,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRecord {
    pub n_qubits: usize,
    /// Median seconds over `repetitions`.
    pub wall_time: f64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// log10(seconds) against n over records with `n >= fit_from`.
    pub fit: Option<LinearFit>,
}

pub fn check_range(range: &RangeInclusive<usize>) -> Result<(), BenchError> {
    let (min, max) = (*range.start(), *range.end());
    if min < 2 || max > MAX_BENCH_QUBITS || min > max {
        return Err(BenchError::Range { min, max });
    }
    Ok(())
}

/// Times simulate + argmax of the ansatz for a fresh random digest per repetition.
/// Circuit construction is outside the timed region.
pub fn bench_simulator(
    range: RangeInclusive<usize>,
    reps: usize,
    seed: u64,
    fit_from: usize,
) -> Result<BenchReport, BenchError> {
    check_range(&range)?;
    if reps == 0 {
        return Err(BenchError::ZeroReps);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for n in range {
        let mut times = Vec::with_capacity(reps);
        for _ in 0..reps {
            let mut bytes = [0u8; 32];
            rng.fill_bytes(&mut bytes);
            let circuit = build_ansatz(&encode_angles(&Digest256(bytes)), n).expect("range checked above");
            let start = Instant::now();
            black_box(most_probable_state(&simulate(black_box(&circuit))));
            times.push(start.elapsed().as_secs_f64().max(1e-9));
        }
        records.push(BenchRecord {
            n_qubits: n,
            wall_time: median(&times).expect("reps >= 1"),
            repetitions: reps,
        });
    }
    let samples: Vec<(usize, f64)> = records.iter().map(|r| (r.n_qubits, r.wall_time)).collect();
    Ok(BenchReport { fit: fit_log10_slope(&samples, fit_from), records })
}
