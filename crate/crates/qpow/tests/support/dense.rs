//! Full-unitary reference: every gate becomes a dense 2^n × 2^n matrix built entry by entry
//! from its definition, and the circuit is the ordered matrix product applied to |0…0⟩.

use num_complex::Complex64;
use qpow_core::{Circuit, Gate, GateKind};

pub type Matrix = Vec<Vec<Complex64>>;

fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

fn local(gate: &Gate) -> [[Complex64; 2]; 2] {
    let h = gate.angle / 2.0;
    match gate.kind {
        GateKind::Rx | GateKind::Crx => {
            let c = Complex64::new(h.cos(), 0.0);
            let s = Complex64::new(0.0, -h.sin());
            [[c, s], [s, c]]
        }
        GateKind::Rz => [
            [Complex64::from_polar(1.0, -h), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, h)],
        ],
    }
}

pub fn gate_matrix(gate: &Gate, n: usize) -> Matrix {
    let dim = 1 << n;
    let m = local(gate);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut u = vec![vec![zero; dim]; dim];
    for (i, row) in u.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let others_equal = (0..n).filter(|&q| q != gate.target).all(|q| bit(i, q, n) == bit(j, q, n));
            if !others_equal {
                continue;
            }
            let active = gate.control.is_none_or(|c| bit(j, c, n) == 1);
            *entry = if active {
                m[bit(i, gate.target, n)][bit(j, gate.target, n)]
            } else if i == j {
                one
            } else {
                zero
            };
        }
    }
    u
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Product of all gate matrices, last gate leftmost.
pub fn circuit_unitary(circuit: &Circuit) -> Matrix {
    let n = circuit.n_qubits();
    let dim = 1 << n;
    let mut u: Matrix = (0..dim)
        .map(|i| (0..dim).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    for gate in circuit.gates() {
        u = matmul(&gate_matrix(gate, n), &u);
    }
    u
}

/// Final state: first column of the circuit unitary.
pub fn final_state(circuit: &Circuit) -> Vec<Complex64> {
    circuit_unitary(circuit).iter().map(|row| row[0]).collect()
}

/// Exhaustive argmax over |amplitude|², lowest index on ties.
pub fn argmax(state: &[Complex64]) -> usize {
    let probs: Vec<f64> = state.iter().map(|a| a.norm_sqr()).collect();
    (0..probs.len()).find(|&i| probs.iter().all(|&p| probs[i] >= p)).unwrap()
}
