//! Exact statevector simulation, Born-rule sampling and most-probable-state extraction.
//!
//! Qubit `q` of an `n`-qubit register lives at bit `n - 1 - q` of the amplitude index, so
//! the index rendered as an `n`-bit binary string has qubit 0 as its most significant bit.
//! Gates are applied in place by pairing amplitudes whose indices differ only in the target
//! bit. No full unitary is ever formed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Statevector { n_qubits, amplitudes }
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(Error::StateLength { expected, actual: amplitudes.len() });
        }
        Ok(Statevector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn probabilities(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|a| a.norm_sqr())
    }

    /// L2 norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.probabilities().sum())
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies one gate in place. Qubit indices must already be validated for this register.
    pub fn apply(&mut self, gate: &Gate) {
        let half = 0.5 * gate.angle;
        let (c, s) = (libm::cos(half), libm::sin(half));
        let target = self.mask(gate.target);
        let control = gate.control.map_or(0, |q| self.mask(q));
        match gate.kind {
            GateKind::Rx | GateKind::Crx => {
                // [[c, -is], [-is, c]]
                let mis = Complex64::new(0.0, -s);
                self.for_each_pair(target, control, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * mis;
                    *b = x * mis + y * c;
                });
            }
            GateKind::Rz => {
                let lower = Complex64::new(c, -s);
                let upper = Complex64::new(c, s);
                self.for_each_pair(target, control, |a, b| {
                    *a *= lower;
                    *b *= upper;
                });
            }
        }
    }

    /// Calls `f(lo, hi)` for every amplitude pair split by `target`, skipping pairs whose
    /// `control` bit is clear. A zero control mask means unconditional.
    fn for_each_pair(
        &mut self,
        target: usize,
        control: usize,
        mut f: impl FnMut(&mut Complex64, &mut Complex64),
    ) {
        for (block, chunk) in self.amplitudes.chunks_exact_mut(2 * target).enumerate() {
            let base = block * 2 * target;
            let (lo, hi) = chunk.split_at_mut(target);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if control != 0 && (base + k) & control == 0 {
                    continue;
                }
                f(a, b);
            }
        }
    }
}

/// Runs `circuit` from |0…0⟩.
pub fn simulate(circuit: &Circuit) -> Statevector {
    simulate_observed(circuit, |_, _| {})
}

/// Like [`simulate`], calling `observer(gate_index, state)` after each gate.
pub fn simulate_observed(circuit: &Circuit, mut observer: impl FnMut(usize, &Statevector)) -> Statevector {
    let mut state = Statevector::zero(circuit.n_qubits());
    for (i, gate) in circuit.gates().iter().enumerate() {
        state.apply(gate);
        debug_assert!(libm::fabs(state.norm() - 1.0) < 1e-10, "norm drifted after gate {i}");
        observer(i, &state);
    }
    state
}

/// Renders a basis index as `n` bits, qubit 0 first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits).map(|q| if index >> (n_qubits - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisOutcome {
    pub index: usize,
    pub n_qubits: usize,
    pub probability: f64,
}

impl BasisOutcome {
    pub fn bits(&self) -> String {
        bitstring(self.index, self.n_qubits)
    }
}

/// Basis state of largest probability. Exact ties go to the lowest index.
pub fn most_probable_state(state: &Statevector) -> BasisOutcome {
    let mut best = BasisOutcome { index: 0, n_qubits: state.n_qubits, probability: -1.0 };
    for (index, p) in state.probabilities().enumerate() {
        if p > best.probability {
            best.index = index;
            best.probability = p;
        }
    }
    best
}

/// Shot counts indexed by basis state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts[index]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Most frequent outcome, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }

    /// Non-empty bins as `(bitstring, count)` in index order.
    pub fn iter_bits(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (bitstring(i, self.n_qubits), c))
    }
}

/// Draws `shots` basis states from the Born distribution with a seeded ChaCha8 generator.
pub fn sample_counts(state: &Statevector, shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let dist = WeightedIndex::new(state.probabilities())
        .map_err(|_| Error::InvalidProbability { name: "amplitude weights", value: state.norm() })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; state.amplitudes.len()];
    for _ in 0..shots {
        counts[dist.sample(&mut rng)] += 1;
    }
    Ok(Histogram { n_qubits: state.n_qubits, counts })
}

/// Turns a circuit into the n-bit outcome fed to the second hash.
pub trait Backend {
    /// Basis index of the reported outcome.
    fn evaluate(&mut self, circuit: &Circuit) -> usize;
}

/// Noiseless backend: the exact most probable state.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Backend for Exact {
    fn evaluate(&mut self, circuit: &Circuit) -> usize {
        most_probable_state(&simulate(circuit)).index
    }
}

impl<B: Backend + ?Sized> Backend for &mut B {
    fn evaluate(&mut self, circuit: &Circuit) -> usize {
        (**self).evaluate(circuit)
    }
}
