//! Hardware-noise emulation for the sampling step.
//!
//! A noisy run keeps the exact most probable state with probability
//! `(1 - e_cnot)^cnots`, and otherwise reports a uniformly random basis state. Each reported
//! bit is then flipped independently with probability `e_readout`. In expectation this
//! reproduces the survival formula `(1 - e_cnot)^cnots · (1 - e_readout)^n`.

use core::fmt;
use core::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{build_ansatz, Circuit};
use crate::error::{Error, Result};
use crate::hashing::{encode_angles, Digest256};
use crate::simulator::{most_probable_state, simulate, Backend, Statevector};

pub const DEFAULT_E_CNOT: f64 = 0.01;
pub const DEFAULT_E_READOUT: f64 = 0.02;
pub const DEFAULT_NOISE_SEED: u64 = 0x7170_6f77;

/// Average CNOTs in the transpiled n-qubit ansatz on a 5-qubit superconducting device.
pub const TRANSPILED_QUITO_CNOTS: [(usize, f64); 4] = [(2, 3.7), (3, 17.5), (4, 40.4), (5, 90.7)];

/// Hardware-versus-simulator agreement measured on the same device, as fractions.
pub const MEASURED_ACCURACY: [(usize, f64); 4] = [(2, 0.94), (3, 0.71), (4, 0.69), (5, 0.35)];

/// How many two-qubit gates enter the survival exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CnotCount {
    /// Count the `CRX` gates in the evaluated circuit.
    FromCircuit,
    /// Fixed real-valued exponent, e.g. an averaged transpiled count.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    pub e_cnot: f64,
    pub e_readout: f64,
    pub effective_cnots: CnotCount,
    pub seed: u64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            e_cnot: DEFAULT_E_CNOT,
            e_readout: DEFAULT_E_READOUT,
            effective_cnots: CnotCount::FromCircuit,
            seed: DEFAULT_NOISE_SEED,
        }
    }
}

impl NoiseParams {
    pub fn noiseless() -> Self {
        NoiseParams { e_cnot: 0.0, e_readout: 0.0, ..Self::default() }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        NoiseParams { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("e_cnot", self.e_cnot), ("e_readout", self.e_readout)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        if let CnotCount::Fixed(c) = self.effective_cnots {
            check_cnots(c)?;
        }
        Ok(())
    }
}

fn check_cnots(cnots: f64) -> Result<()> {
    if cnots.is_finite() && cnots >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCnotCount(cnots))
    }
}

/// `(1 - e_cnot)^cnots · (1 - e_readout)^n`
pub fn accuracy_estimate(n: usize, cnots: f64, params: &NoiseParams) -> f64 {
    libm::pow(1.0 - params.e_cnot, cnots) * libm::pow(1.0 - params.e_readout, n as f64)
}

/// One noisy readout of `state`, as a basis index.
pub fn noisy_outcome<R: RngCore + ?Sized>(
    state: &Statevector,
    params: &NoiseParams,
    cnots: f64,
    rng: &mut R,
) -> usize {
    let n = state.n_qubits();
    let survival = libm::pow(1.0 - params.e_cnot, cnots);
    let mut index = if rng.gen::<f64>() < survival {
        most_probable_state(state).index
    } else {
        rng.gen_range(0..1usize << n)
    };
    for bit in 0..n {
        if rng.gen::<f64>() < params.e_readout {
            index ^= 1 << bit;
        }
    }
    index
}

/// A stateful noisy backend. Owns its generator, seeded from `params.seed`.
#[derive(Clone, Debug)]
pub struct NoisyBackend {
    params: NoiseParams,
    rng: ChaCha8Rng,
}

impl NoisyBackend {
    pub fn new(params: NoiseParams) -> Result<Self> {
        params.validate()?;
        Ok(NoisyBackend { params, rng: ChaCha8Rng::seed_from_u64(params.seed) })
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    fn cnots_for(&self, circuit: &Circuit) -> f64 {
        match self.params.effective_cnots {
            CnotCount::FromCircuit => circuit.count_two_qubit_gates() as f64,
            CnotCount::Fixed(c) => c,
        }
    }
}

impl Backend for NoisyBackend {
    fn evaluate(&mut self, circuit: &Circuit) -> usize {
        let cnots = self.cnots_for(circuit);
        let state = simulate(circuit);
        noisy_outcome(&state, &self.params, cnots, &mut self.rng)
    }
}

/// CNOT-count presets for emulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoisePreset {
    /// Non-transpiled all-to-all ansatz: `n² − n` two-qubit gates.
    Ideal,
    /// Averaged transpiled counts for 2 to 5 qubits.
    TranspiledQuito,
}

impl NoisePreset {
    pub fn name(self) -> &'static str {
        match self {
            NoisePreset::Ideal => "ideal",
            NoisePreset::TranspiledQuito => "transpiled-quito",
        }
    }

    pub fn cnots(self, n: usize) -> Result<f64> {
        match self {
            NoisePreset::Ideal if n >= 2 => Ok((n * n - n) as f64),
            NoisePreset::TranspiledQuito => TRANSPILED_QUITO_CNOTS
                .iter()
                .find(|&&(k, _)| k == n)
                .map(|&(_, c)| c)
                .ok_or(Error::UnsupportedPreset { preset: self.name(), n }),
            NoisePreset::Ideal => Err(Error::UnsupportedPreset { preset: self.name(), n }),
        }
    }

    /// Noise parameters with this preset's fixed CNOT count for `n` qubits.
    pub fn params(self, n: usize, base: NoiseParams) -> Result<NoiseParams> {
        Ok(NoiseParams { effective_cnots: CnotCount::Fixed(self.cnots(n)?), ..base })
    }
}

impl fmt::Display for NoisePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoisePreset {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "ideal" => Ok(NoisePreset::Ideal),
            "transpiled-quito" => Ok(NoisePreset::TranspiledQuito),
            _ => Err("expected `ideal` or `transpiled-quito`"),
        }
    }
}

/// Fraction of `trials` random digests whose noisy outcome agrees with the exact one.
///
/// Digests and noise draw from one generator seeded with `params.seed`. The preset
/// overrides `params.effective_cnots`.
pub fn table1_emulation(n: usize, trials: u32, preset: NoisePreset, params: &NoiseParams) -> Result<f64> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let cnots = preset.cnots(n)?;
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut agree = 0u32;
    for _ in 0..trials {
        let mut bytes = [0u8; 32];
        rng.fill_bytes(&mut bytes);
        let circuit = build_ansatz(&encode_angles(&Digest256(bytes)), n)?;
        let state = simulate(&circuit);
        let exact = most_probable_state(&state).index;
        if noisy_outcome(&state, params, cnots, &mut rng) == exact {
            agree += 1;
        }
    }
    Ok(f64::from(agree) / f64::from(trials))
}
