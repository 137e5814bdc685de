//! The `qpow` command line.
//!
//! Exit codes: 0 success, 1 verification or mining failure, 2 usage or IO error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qpow_core::analysis::{find_crossover, AdvantageModel, Crossover, CrossoverCriterion, MAX_SCAN_QUBITS};
use qpow_core::chain::{
    mine_block, qpow_trace, verify_genesis, verify_successor, ChainFailure, MiningConfig,
    DEFAULT_MAX_ATTEMPTS,
};
use qpow_core::simulator::{sample_counts, simulate};
use qpow_core::{
    Block, Difficulty, Digest256, Error as CoreError, Exact, NoiseParams, NoisePreset, NoisyBackend,
};
use rayon::prelude::*;

use crate::bench::{bench_simulator, check_range};
use crate::miner::{mine_exact, nonce_stream};
use crate::{chainfile, csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SEED: u64 = 2022;
pub const DEFAULT_PAYLOAD: &str = "Schroedinger paid Einstein 1 qBTC";

/// Mixed into `--seed` for the noise generator so it is independent of the nonce streams.
const NOISE_SEED_SALT: u64 = 0x006e_6f69_7365;

/// The mining demo's published input text and its two digests.
pub const WORKED_EXAMPLE_TEXT: &str =
    "4Schroedinger paid Einstein 1 qBTC04ca1a782621a440d03b5d87ecff8b68e2cc6124f57957b49a76bca91dede3a81";
pub const WORKED_EXAMPLE_H1: &str = "e1e5575da3a9e86da135552facddcc1ff44dd26502d0bc2b22961383f8b187ca";
pub const WORKED_EXAMPLE_H2: &str = "f307b3db12a649563831e3e1328c3c7a5b15ee541afaab563727cb992cf9d1ca";

#[derive(Debug, Parser)]
#[command(name = "qpow", version, about = "Quantum proof-of-work miner, verifier and analysis tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine blocks onto a chain file, creating it with a genesis block if absent
    Mine(MineArgs),
    /// Verify every block of a chain file with the exact simulator
    Verify(VerifyArgs),
    /// Print each stage of the qPoW hash for one text
    Hash(HashArgs),
    /// Time the simulator across register widths and fit the log10 slope
    Bench(BenchArgs),
    /// Emit the modelled speed ratio, accuracy and advantage per qubit count
    Advantage(AdvantageArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Exact,
    Noisy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Ideal,
    TranspiledQuito,
}

impl From<PresetArg> for NoisePreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Ideal => NoisePreset::Ideal,
            PresetArg::TranspiledQuito => NoisePreset::TranspiledQuito,
        }
    }
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: BackendKind,
    #[arg(long, value_enum, default_value = "transpiled-quito")]
    pub noise_preset: PresetArg,
    /// Per two-qubit-gate error probability
    #[arg(long, default_value_t = qpow_core::noise::DEFAULT_E_CNOT)]
    pub e_cnot: f64,
    /// Per-qubit readout flip probability
    #[arg(long, default_value_t = qpow_core::noise::DEFAULT_E_READOUT)]
    pub e_readout: f64,
}

impl NoiseArgs {
    fn params(&self, n_qubits: usize, seed: u64) -> anyhow::Result<NoiseParams> {
        let base = NoiseParams {
            e_cnot: self.e_cnot,
            e_readout: self.e_readout,
            seed: seed ^ NOISE_SEED_SALT,
            ..NoiseParams::default()
        };
        let params = NoisePreset::from(self.noise_preset).params(n_qubits, base)?;
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    /// Leading zero hex characters required
    #[arg(long, default_value_t = 1)]
    pub difficulty: u32,
    /// Blocks to append
    #[arg(long, default_value_t = 5)]
    pub blocks: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "chain.json")]
    pub chain: PathBuf,
    #[arg(long, default_value = DEFAULT_PAYLOAD)]
    pub payload: String,
    /// Worker threads for the nonce search (exact backend)
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "chain.json")]
    pub chain: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub difficulty: u32,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct HashArgs {
    /// Text to hash, taken verbatim as UTF-8
    pub text: String,
    #[arg(long, default_value_t = 4)]
    pub qubits: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Shots for the histogram written to --out
    #[arg(long, default_value_t = 20_000)]
    pub shots: u64,
    /// Write a bitstring,count histogram of the exact state here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the gate list
    #[arg(long)]
    pub dump_circuit: bool,
    #[command(flatten)]
    pub noise: NoiseArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    pub min_qubits: usize,
    #[arg(long, default_value_t = 20)]
    pub max_qubits: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Smallest qubit count included in the slope fit
    #[arg(long, default_value_t = qpow_core::analysis::DEFAULT_FIT_FROM)]
    pub fit_from: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdvantageArgs {
    #[arg(long, default_value_t = 2)]
    pub min_qubits: usize,
    #[arg(long, default_value_t = 40)]
    pub max_qubits: usize,
    #[arg(long, default_value_t = qpow_core::noise::DEFAULT_E_CNOT)]
    pub e_cnot: f64,
    #[arg(long, default_value_t = qpow_core::noise::DEFAULT_E_READOUT)]
    pub e_readout: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs one parsed command, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Mine(args) => cmd_mine(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Hash(args) => cmd_hash(&args, out),
        Command::Bench(args) => cmd_bench(&args, out, err),
        Command::Advantage(args) => cmd_advantage(&args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn difficulty(value: u32) -> anyhow::Result<Difficulty> {
    Ok(Difficulty::new(value)?)
}

/// Links and indices only; no simulation.
fn check_structure(chain: &[Block]) -> anyhow::Result<()> {
    let Some(genesis) = chain.first() else { bail!("chain file holds no blocks") };
    if genesis.index != 0 || genesis.prev_hash != Digest256::ZERO {
        bail!("first block is not a genesis block");
    }
    for pair in chain.windows(2) {
        if pair[1].index != pair[0].index + 1 || pair[1].prev_hash != pair[0].pow_hash {
            bail!("block {} does not extend block {}", pair[1].index, pair[0].index);
        }
    }
    Ok(())
}

fn with_output<F>(path: Option<&Path>, out: &mut dyn Write, body: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(out)?,
    }
    Ok(())
}

pub fn cmd_mine(args: &MineArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let d = difficulty(args.difficulty)?;
    let mut chain = if args.chain.exists() {
        let chain = chainfile::load(&args.chain)?;
        check_structure(&chain).with_context(|| format!("invalid chain file {}", args.chain.display()))?;
        chain
    } else {
        vec![Block::genesis(args.qubits, now())?]
    };
    let config = MiningConfig { max_attempts: args.max_attempts, ..MiningConfig::new(d, args.qubits) };
    let mut noisy = match args.noise.backend {
        BackendKind::Exact => None,
        BackendKind::Noisy => Some(NoisyBackend::new(args.noise.params(args.qubits, args.seed)?)?),
    };

    let mut code = EXIT_OK;
    for _ in 0..args.blocks {
        let prev = chain.last().expect("chain starts with genesis");
        let start = Instant::now();
        let mined = match noisy.as_mut() {
            None => mine_exact(prev, &args.payload, &config, args.seed, now(), args.jobs),
            Some(backend) => {
                let mut nonces = nonce_stream(args.seed, prev);
                mine_block(prev, &args.payload, &config, backend, &mut nonces, now())
            }
        };
        match mined {
            Ok(m) => {
                writeln!(
                    out,
                    "block {} nonce {} attempts {} elapsed {:.3}s pow {}",
                    m.block.index,
                    m.block.nonce,
                    m.attempts,
                    start.elapsed().as_secs_f64(),
                    m.block.pow_hash
                )?;
                chain.push(m.block);
            }
            Err(CoreError::AttemptCapExceeded { attempts }) => {
                writeln!(out, "mining failed: no valid nonce in {attempts} attempts")?;
                code = EXIT_FAILURE;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    chainfile::save(&args.chain, &chain)?;
    writeln!(out, "wrote {} blocks to {}", chain.len(), args.chain.display())?;
    Ok(code)
}

/// Outcome of checking every block of a chain independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub blocks: usize,
    /// Successors (index ≥ 1) that pass against their stored predecessor.
    pub passed: usize,
    pub first_failure: Option<ChainFailure>,
}

/// Checks genesis, then each successor against its predecessor, in parallel when
/// `jobs > 1`. `first_failure` is the same failure `verify_chain` would report.
pub fn verify_report(chain: &[Block], d: Difficulty, jobs: usize) -> ChainReport {
    let Some(genesis) = chain.first() else {
        return ChainReport {
            blocks: 0,
            passed: 0,
            first_failure: Some(ChainFailure { position: 0, reason: qpow_core::FailureReason::EmptyChain }),
        };
    };
    let check = |pair: &[Block]| verify_successor(&pair[0], &pair[1], d);
    let results: Vec<_> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| chain.par_windows(2).map(check).collect())
    } else {
        chain.windows(2).map(check).collect()
    };
    let genesis_failure = verify_genesis(genesis).err().map(|reason| ChainFailure { position: 0, reason });
    let first_failure = genesis_failure.or_else(|| {
        results
            .iter()
            .position(Result::is_err)
            .map(|i| ChainFailure { position: i + 1, reason: results[i].unwrap_err() })
    });
    ChainReport { blocks: chain.len(), passed: results.iter().filter(|r| r.is_ok()).count(), first_failure }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let d = difficulty(args.difficulty)?;
    let chain = chainfile::load(&args.chain)?;
    let report = verify_report(&chain, d, args.jobs);
    let mined = report.blocks.saturating_sub(1);
    writeln!(out, "blocks: {} (difficulty {})", report.blocks, d.value())?;
    if mined > 0 {
        writeln!(out, "passed: {}/{} ({:.3})", report.passed, mined, report.passed as f64 / mined as f64)?;
    }
    match report.first_failure {
        None => {
            writeln!(out, "chain valid")?;
            Ok(EXIT_OK)
        }
        Some(f) => {
            writeln!(out, "first failure: {f}")?;
            writeln!(out, "chain invalid")?;
            Ok(EXIT_FAILURE)
        }
    }
}

pub fn cmd_hash(args: &HashArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let text = args.text.as_bytes();
    let trace = match args.noise.backend {
        BackendKind::Exact => qpow_trace(text, args.qubits, &mut Exact)?,
        BackendKind::Noisy => {
            let mut backend = NoisyBackend::new(args.noise.params(args.qubits, args.seed)?)?;
            qpow_trace(text, args.qubits, &mut backend)?
        }
    };
    let state = simulate(&trace.circuit);
    let quads: Vec<String> = trace.angles.quads().iter().map(u8::to_string).collect();

    writeln!(out, "text:     {}", args.text)?;
    writeln!(out, "h1:       {}", trace.h1)?;
    writeln!(out, "angles:   {} (x pi/8)", quads.join(" "))?;
    writeln!(
        out,
        "circuit:  {} qubits, {} gates, {} CRX",
        trace.circuit.n_qubits(),
        trace.circuit.gates().len(),
        trace.circuit.count_two_qubit_gates()
    )?;
    writeln!(out, "outcome:  {} (p = {:.6})", trace.bits(), state.probability(trace.outcome))?;
    writeln!(out, "h2:       {}", trace.h2)?;
    if args.text == WORKED_EXAMPLE_TEXT {
        let verdict = |ok: bool| if ok { "match" } else { "mismatch" };
        writeln!(
            out,
            "reference h1: {} ({WORKED_EXAMPLE_H1})",
            verdict(trace.h1.to_hex() == WORKED_EXAMPLE_H1)
        )?;
        writeln!(
            out,
            "reference h2: {} ({WORKED_EXAMPLE_H2})",
            verdict(trace.h2.to_hex() == WORKED_EXAMPLE_H2)
        )?;
    }
    if args.dump_circuit {
        write!(out, "{}", trace.circuit.dump())?;
    }
    if let Some(path) = &args.out {
        let histogram = sample_counts(&state, args.shots, args.seed)?;
        with_output(Some(path), out, |w| csv::write_histogram(w, &histogram))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let range = args.min_qubits..=args.max_qubits;
    check_range(&range)?;
    let report = bench_simulator(range, args.reps, args.seed, args.fit_from)?;
    with_output(args.out.as_deref(), out, |w| csv::write_bench(w, &report.records))?;
    match report.fit {
        Some(fit) => writeln!(
            err,
            "log10 slope {:.4} per qubit over n >= {} (intercept {:.4}); doubling gives 0.3010",
            fit.slope, args.fit_from, fit.intercept
        )?,
        None => writeln!(err, "no slope: fewer than two widths at n >= {}", args.fit_from)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_advantage(args: &AdvantageArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    if args.min_qubits < 2 || args.min_qubits > args.max_qubits || args.max_qubits > MAX_SCAN_QUBITS {
        bail!("qubit range must lie within 2..={MAX_SCAN_QUBITS}");
    }
    let noise = NoiseParams { e_cnot: args.e_cnot, e_readout: args.e_readout, ..NoiseParams::default() };
    noise.validate()?;
    let model = AdvantageModel::with_noise(noise);
    let rows = model.sweep(args.min_qubits..=args.max_qubits);
    with_output(args.out.as_deref(), out, |w| csv::write_advantage(w, &rows))?;

    for (label, criterion) in
        [("speed ratio", CrossoverCriterion::SpeedRatio), ("advantage", CrossoverCriterion::Advantage)]
    {
        match find_crossover(&model, criterion, MAX_SCAN_QUBITS)? {
            Crossover::Found { n, value } => writeln!(err, "{label} >= 1 from n = {n} ({value:.4})")?,
            Crossover::NotFound { best_n, best_value } => writeln!(
                err,
                "{label} never reaches 1 up to n = {MAX_SCAN_QUBITS}; peak {best_value:.4} at n = {best_n}"
            )?,
        }
    }
    if find_crossover(&model, CrossoverCriterion::Advantage, 30)?.n().is_none() {
        writeln!(
            err,
            "note: advantage at n = 30 is {:.4}; under these error rates 30 qubits give no advantage",
            model.advantage(30)
        )?;
    }
    Ok(EXIT_OK)
}
