//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails.
//!
//! Run alone with `cargo test -p qpow --test acceptance`.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qpow_core::analysis::{find_crossover, AdvantageModel, CrossoverCriterion, REFERENCE_TIME_RATIO_E3};
use qpow_core::chain::{check_difficulty, mine_block, verify_block, MiningConfig};
use qpow_core::circuit::build_ansatz;
use qpow_core::noise::MEASURED_ACCURACY;
use qpow_core::simulator::{most_probable_state, sample_counts, simulate, simulate_observed};
use qpow_core::{
    accuracy_estimate, encode_angles, sha3_256, Block, Circuit, Difficulty, Digest256, Exact, Gate,
    NoiseParams, NoisePreset, NoisyBackend,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpow::bench::bench_simulator;
use qpow::cli::{self, Cli};

use clap::Parser;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_digest(rng: &mut ChaCha8Rng) -> Digest256 {
    let mut bytes = [0u8; 32];
    rng.fill_bytes(&mut bytes);
    Digest256(bytes)
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

/// AC1: 50 exact-mined blocks (n=4, d=1) all verify, under 60 s.
fn round_trip_soundness() -> Outcome {
    let start = Instant::now();
    let d = Difficulty::new(1).unwrap();
    let config = MiningConfig::new(d, 4);
    let mut nonces = ChaCha8Rng::seed_from_u64(101);
    let mut prev = Block::genesis(4, 0).unwrap();
    let mut verified = 0;
    for i in 0..50 {
        let mined = mine_block(&prev, &format!("tx {i}"), &config, &mut Exact, &mut nonces, 0).unwrap();
        if verify_block(&mined.block, &prev, d).is_ok() {
            verified += 1;
        }
        prev = mined.block;
    }
    let elapsed = start.elapsed();
    outcome(
        verified == 50 && within(elapsed, 60),
        format!("{verified}/50 verified in {:.2}s (limit 60s)", elapsed.as_secs_f64()),
    )
}

/// AC2: Noisy mining with the transpiled-quito preset: pass rate in [0.55, 0.80] over
/// 200 blocks, under 10 min.
fn noisy_verification_rate() -> Outcome {
    let start = Instant::now();
    let d = Difficulty::new(1).unwrap();
    let params = NoisePreset::TranspiledQuito.params(4, NoiseParams::default().with_seed(202)).unwrap();
    let mut backend = NoisyBackend::new(params).unwrap();
    let config = MiningConfig::new(d, 4);
    let mut nonces = ChaCha8Rng::seed_from_u64(203);
    let mut prev = Block::genesis(4, 0).unwrap();
    let blocks = 200;
    let mut passed = 0;
    for i in 0..blocks {
        let mined = mine_block(&prev, &format!("tx {i}"), &config, &mut backend, &mut nonces, 0).unwrap();
        if verify_block(&mined.block, &prev, d).is_ok() {
            passed += 1;
        }
        prev = mined.block;
    }
    let rate = f64::from(passed) / f64::from(blocks);
    let elapsed = start.elapsed();
    let analytic = accuracy_estimate(4, 40.4, &params);
    outcome(
        (0.55..=0.80).contains(&rate) && within(elapsed, 600),
        format!(
            "pass rate {rate:.3} ({passed}/{blocks}), survival formula {analytic:.3}, hardware 0.71; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// AC3: accuracy_estimate(4, 40, 0.01, 0) = 0.669 ± 0.001.
fn accuracy_point() -> Outcome {
    let params = NoiseParams { e_cnot: 0.01, e_readout: 0.0, ..NoiseParams::default() };
    let value = accuracy_estimate(4, 40.0, &params);
    outcome((value - 0.669).abs() <= 0.001, format!("{value:.5} vs 0.669 ± 0.001"))
}

/// AC4: d=1 pass rate 1/16 ± 0.01 over 10,000 digests; mean attempts in [12, 21] over 100 mines.
fn difficulty_statistics() -> Outcome {
    let start = Instant::now();
    let d = Difficulty::new(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| {
            let mut input = [0u8; 16];
            rng.fill_bytes(&mut input);
            check_difficulty(&sha3_256(&input), d)
        })
        .count();
    let rate = hits as f64 / trials as f64;

    let config = MiningConfig::new(d, 4);
    let mut nonces = ChaCha8Rng::seed_from_u64(405);
    let genesis = Block::genesis(4, 0).unwrap();
    let mines = 100;
    let total: u64 = (0..mines)
        .map(|i| {
            mine_block(&genesis, &format!("m{i}"), &config, &mut Exact, &mut nonces, 0).unwrap().attempts
        })
        .sum();
    let mean = total as f64 / f64::from(mines);
    let elapsed = start.elapsed();
    outcome(
        (rate - 1.0 / 16.0).abs() <= 0.01 && (12.0..=21.0).contains(&mean) && within(elapsed, 120),
        format!(
            "pass rate {rate:.4} (target 0.0625 ± 0.01), mean attempts {mean:.2} (target [12, 21]); {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// AC5: Stride simulator against the dense matrix-chain oracle: 100 digests at n = 2 and 3.
fn simulator_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst = 0.0f64;
    let mut argmax_mismatch = 0;
    for _ in 0..100 {
        let angles = encode_angles(&random_digest(&mut rng));
        for n in [2, 3] {
            let circuit = build_ansatz(&angles, n).unwrap();
            let fast = simulate(&circuit);
            let reference = support::dense::final_state(&circuit);
            for (a, b) in fast.amplitudes().iter().zip(&reference) {
                worst = worst.max((a - b).norm());
            }
            if most_probable_state(&fast).index != support::dense::argmax(&reference) {
                argmax_mismatch += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-9 && argmax_mismatch == 0 && within(elapsed, 30),
        format!(
            "max |Δamp| {worst:.2e} (limit 1e-9), argmax mismatches {argmax_mismatch}/200; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// AC6: Norm within 1e-10 of 1 after every gate over 1,000 random circuits, n <= 6.
fn unitarity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    let mut gates_checked = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let count = rng.gen_range(1..=120);
        let gates = (0..count)
            .map(|_| {
                let angle = rng.gen_range(-4.0 * std::f64::consts::PI..4.0 * std::f64::consts::PI);
                let target = rng.gen_range(0..n);
                match (rng.gen_range(0..3), n) {
                    (0, _) | (2, 1) => Gate::rx(target, angle),
                    (1, _) => Gate::rz(target, angle),
                    _ => {
                        let control = (target + rng.gen_range(1..n)) % n;
                        Gate::crx(control, target, angle)
                    }
                }
            })
            .collect();
        let circuit = Circuit::new(n, gates).unwrap();
        simulate_observed(&circuit, |_, state| {
            worst = worst.max((state.norm() - 1.0).abs());
            gates_checked += 1;
        });
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within(elapsed, 60),
        format!(
            "max |norm - 1| {worst:.2e} over {gates_checked} gates (limit 1e-10); {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

/// AC7: Speed-ratio crossover at n = 20 with classical 39.81 and quantum 39.70 (± 0.01).
fn model_crossover() -> Outcome {
    let model = AdvantageModel::default();
    let crossover = find_crossover(&model, CrossoverCriterion::SpeedRatio, 200).unwrap().n();
    let (c, q) = (model.classical_time(20.0), model.quantum_time(20.0));
    outcome(
        crossover == Some(20) && (c - 39.81).abs() <= 0.01 && (q - 39.70).abs() <= 0.01,
        format!("crossover {crossover:?}, classical(20) {c:.4}, quantum(20) {q:.4}"),
    )
}

/// AC8: Fitted log10 slope of simulation time over n in [15, 22] lies in [0.25, 0.40].
fn measured_scaling() -> Outcome {
    let start = Instant::now();
    let report = bench_simulator(15..=22, 3, 808, 15).unwrap();
    let elapsed = start.elapsed();
    let slope = report.fit.map_or(f64::NAN, |f| f.slope);
    let times: Vec<String> =
        report.records.iter().map(|r| format!("{}:{:.4}s", r.n_qubits, r.wall_time)).collect();
    outcome(
        (0.25..=0.40).contains(&slope) && within(elapsed, 900),
        format!(
            "slope {slope:.4} (target [0.25, 0.40]) [{}]; {:.2}s",
            times.join(" "),
            elapsed.as_secs_f64()
        ),
    )
}

/// AC9: 20,000-shot argmax equals exact argmax in >= 19 of 20 circuits with top-two gap > 0.02.
fn sampling_consistency() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut agree = 0;
    let mut circuits = 0;
    while circuits < 20 {
        let circuit = build_ansatz(&encode_angles(&random_digest(&mut rng)), 4).unwrap();
        let state = simulate(&circuit);
        let mut probs: Vec<f64> = state.probabilities().collect();
        probs.sort_by(|a, b| b.total_cmp(a));
        if probs[0] - probs[1] <= 0.02 {
            continue;
        }
        circuits += 1;
        let histogram = sample_counts(&state, 20_000, rng.next_u64()).unwrap();
        if histogram.argmax() == most_probable_state(&state).index {
            agree += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        agree >= 19 && within(elapsed, 60),
        format!("{agree}/20 sampled argmax agree (need 19); {:.2}s", elapsed.as_secs_f64()),
    )
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(args).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// AC10: Items that cannot be reproduced at a desk are reported, not asserted. These are
/// the worked example's digests, the hardware time ratios and the ~30-qubit threshold.
fn non_reproducible_items_reported() -> Outcome {
    let (code, out, _) = run_cli(&["qpow", "hash", cli::WORKED_EXAMPLE_TEXT]);
    let h1_line = out.lines().find(|l| l.starts_with("reference h1:")).unwrap_or("missing");
    let h2_line = out.lines().find(|l| l.starts_with("reference h2:")).unwrap_or("missing");
    let h2_status = h2_line.split_whitespace().nth(2).unwrap_or("missing");

    let (adv_code, _, adv_err) = run_cli(&["qpow", "advantage", "--max-qubits", "40"]);
    let flagged = adv_err.contains("note: advantage at n = 30");

    let reference_tables = REFERENCE_TIME_RATIO_E3.len() == 4 && MEASURED_ACCURACY.len() == 4;
    let pass = code == 0
        && adv_code == 0
        && h1_line.contains(": match")
        && matches!(h2_status, "match" | "mismatch")
        && flagged
        && reference_tables;
    outcome(
        pass,
        format!(
            "h1 reproduced: {}; h2 {h2_status}; advantage gap flagged: {flagged}; hardware time ratios kept as reference data",
            h1_line.contains(": match")
        ),
    )
}

fn main() -> ExitCode {
    // The harness is custom: ignore libtest flags such as --nocapture or filters.
    let criteria: [(&str, Check); 10] = [
        ("AC1 round-trip soundness", round_trip_soundness),
        ("AC2 noisy verification rate", noisy_verification_rate),
        ("AC3 accuracy formula point check", accuracy_point),
        ("AC4 difficulty statistics", difficulty_statistics),
        ("AC5 simulator oracle equivalence", simulator_oracle),
        ("AC6 unitarity", unitarity),
        ("AC7 model crossover", model_crossover),
        ("AC8 measured scaling", measured_scaling),
        ("AC9 sampling consistency", sampling_consistency),
        ("AC10 non-reproducible items reported", non_reproducible_items_reported),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", result.detail);
        if !result.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
