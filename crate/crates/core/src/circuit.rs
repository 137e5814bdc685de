//! The angle-parametrized ansatz.
//!
//! A layer is a rotation sub-layer (`RX(q)` then `RZ(q)` for every qubit in ascending order)
//! followed by an all-to-all entangling sub-layer. In that sub-layer, controls run from
//! `n-1` down to `0`, and each control drives a `CRX` onto every other qubit in ascending
//! order. Angles are consumed one per gate, in order. Layers repeat until all 64 angles are
//! used, and the last layer is cut off at the 64th gate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::hashing::{AngleVector, ANGLE_COUNT, ANGLE_STEP};

/// Smallest register the ansatz is defined for.
pub const MIN_ANSATZ_QUBITS: usize = 2;

/// Default upper bound on ansatz width. 2^30 amplitudes take 16 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Rz,
    Crx,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Rz => "RZ",
            GateKind::Crx => "CRX",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    /// Set for `Crx` only.
    pub control: Option<usize>,
    /// Radians.
    pub angle: f64,
}

impl Gate {
    pub fn rx(target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Rx, target, control: None, angle }
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Rz, target, control: None, angle }
    }

    pub fn crx(control: usize, target: usize, angle: f64) -> Self {
        Gate { kind: GateKind::Crx, target, control: Some(control), angle }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind == GateKind::Crx
    }

    fn check(&self, index: usize, n_qubits: usize) -> Result<()> {
        let fail = |reason| Err(Error::InvalidGate { index, n_qubits, reason });
        if self.target >= n_qubits {
            return fail("target out of range");
        }
        if !self.angle.is_finite() {
            return fail("angle is not finite");
        }
        match (self.kind, self.control) {
            (GateKind::Crx, Some(c)) if c >= n_qubits => fail("control out of range"),
            (GateKind::Crx, Some(c)) if c == self.target => fail("control equals target"),
            (GateKind::Crx, None) => fail("CRX without control"),
            (GateKind::Rx | GateKind::Rz, Some(_)) => fail("single-qubit gate with control"),
            _ => Ok(()),
        }
    }
}

/// An ordered gate list over a fixed register. Qubit indices are validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::QubitCount { n: n_qubits, min: 1, max: DEFAULT_MAX_QUBITS });
        }
        for (i, g) in gates.iter().enumerate() {
            g.check(i, n_qubits)?;
        }
        Ok(Circuit { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of `CRX` gates.
    pub fn count_two_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// One gate per line: `KIND CONTROL TARGET K`, where the angle is `K·π/8`.
    /// Single-qubit gates print `-` for the control. Angles off the π/8 grid print
    /// the fractional multiple to 6 decimals.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.kind.name())?;
        match self.control {
            Some(c) => write!(f, "{c} ")?,
            None => f.write_str("- ")?,
        }
        let multiple = self.angle / ANGLE_STEP;
        let rounded = libm::round(multiple);
        if libm::fabs(multiple - rounded) < 1e-9 {
            write!(f, "{} {}", self.target, rounded as i64)
        } else {
            write!(f, "{} {:.6}", self.target, multiple)
        }
    }
}

/// Number of gates in one full rotation plus entangling layer.
pub fn layer_size(n_qubits: usize) -> usize {
    2 * n_qubits + n_qubits * (n_qubits - 1)
}

/// Builds the ansatz with the default width bound.
pub fn build_ansatz(angles: &AngleVector, n_qubits: usize) -> Result<Circuit> {
    build_ansatz_with_limit(angles, n_qubits, DEFAULT_MAX_QUBITS)
}

pub fn build_ansatz_with_limit(angles: &AngleVector, n_qubits: usize, max_qubits: usize) -> Result<Circuit> {
    let max = max_qubits.min(DEFAULT_MAX_QUBITS);
    if !(MIN_ANSATZ_QUBITS..=max).contains(&n_qubits) {
        return Err(Error::QubitCount { n: n_qubits, min: MIN_ANSATZ_QUBITS, max });
    }

    let mut gates = Vec::with_capacity(ANGLE_COUNT);
    let mut next = angles.iter();
    'layers: loop {
        for q in 0..n_qubits {
            for kind in [GateKind::Rx, GateKind::Rz] {
                let Some(angle) = next.next() else { break 'layers };
                gates.push(Gate { kind, target: q, control: None, angle });
            }
        }
        for c in (0..n_qubits).rev() {
            for t in (0..n_qubits).filter(|&t| t != c) {
                let Some(angle) = next.next() else { break 'layers };
                gates.push(Gate::crx(c, t, angle));
            }
        }
    }
    debug_assert_eq!(gates.len(), ANGLE_COUNT);
    Ok(Circuit { n_qubits, gates })
}
