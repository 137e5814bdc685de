//! Quantum-advantage model and scaling fits.
//!
//! Runtime models are relative, dimensionless times:
//!
//! * classical simulator: `10^(0.33·n − 5)`
//! * quantum device: `0.07·(n² + 3n) + 7.5`
//!
//! Advantage is the speed ratio (classical over quantum) times the device accuracy for an
//! `n² − n` two-qubit-gate circuit.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::noise::{accuracy_estimate, NoiseParams};

/// Largest register a crossover scan may visit.
pub const MAX_SCAN_QUBITS: usize = 200;

/// Qubit count where the fitted classical runtime starts to hold.
pub const DEFAULT_FIT_FROM: usize = 15;

/// Device-time over simulator-time ratios (×1e-3) for 2 to 5 qubits, kept as reference data.
pub const REFERENCE_TIME_RATIO_E3: [(usize, f64); 4] = [(2, 6.0), (3, 8.0), (4, 8.4), (5, 10.5)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvantageModel {
    /// log10 slope per qubit of the classical fit.
    pub classical_slope: f64,
    pub classical_intercept: f64,
    /// `quantum_scale · (n² + quantum_linear · n) + quantum_offset`
    pub quantum_scale: f64,
    pub quantum_linear: f64,
    pub quantum_offset: f64,
    pub noise: NoiseParams,
}

impl Default for AdvantageModel {
    fn default() -> Self {
        AdvantageModel {
            classical_slope: 0.33,
            classical_intercept: -5.0,
            quantum_scale: 0.07,
            quantum_linear: 3.0,
            quantum_offset: 7.5,
            noise: NoiseParams::default(),
        }
    }
}

impl AdvantageModel {
    pub fn with_noise(noise: NoiseParams) -> Self {
        AdvantageModel { noise, ..Self::default() }
    }

    pub fn classical_time(&self, n: f64) -> f64 {
        libm::pow(10.0, self.classical_slope * n + self.classical_intercept)
    }

    pub fn quantum_time(&self, n: f64) -> f64 {
        self.quantum_scale * (n * n + self.quantum_linear * n) + self.quantum_offset
    }

    pub fn speed_ratio(&self, n: f64) -> f64 {
        self.classical_time(n) / self.quantum_time(n)
    }

    /// Two-qubit gates in the non-transpiled ansatz: `n² − n`.
    pub fn cnot_count(n: usize) -> f64 {
        (n * n).saturating_sub(n) as f64
    }

    pub fn accuracy(&self, n: usize) -> f64 {
        accuracy_estimate(n, Self::cnot_count(n), &self.noise)
    }

    pub fn advantage(&self, n: usize) -> f64 {
        self.speed_ratio(n as f64) * self.accuracy(n)
    }

    pub fn row(&self, n: usize) -> AdvantageRow {
        let x = n as f64;
        AdvantageRow {
            n,
            classical_time: self.classical_time(x),
            quantum_time: self.quantum_time(x),
            speed_ratio: self.speed_ratio(x),
            accuracy: self.accuracy(n),
            advantage: self.advantage(n),
        }
    }

    pub fn sweep(&self, range: core::ops::RangeInclusive<usize>) -> Vec<AdvantageRow> {
        range.map(|n| self.row(n)).collect()
    }
}

/// One line of the advantage sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvantageRow {
    pub n: usize,
    pub classical_time: f64,
    pub quantum_time: f64,
    pub speed_ratio: f64,
    pub accuracy: f64,
    pub advantage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossoverCriterion {
    SpeedRatio,
    Advantage,
}

impl CrossoverCriterion {
    fn value(self, model: &AdvantageModel, n: usize) -> f64 {
        match self {
            CrossoverCriterion::SpeedRatio => model.speed_ratio(n as f64),
            CrossoverCriterion::Advantage => model.advantage(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossover {
    /// Smallest `n` with value ≥ 1.
    Found { n: usize, value: f64 },
    /// Never reached 1 up to `n_max`; the largest value seen and where.
    NotFound { best_n: usize, best_value: f64 },
}

impl Crossover {
    pub fn n(&self) -> Option<usize> {
        match *self {
            Crossover::Found { n, .. } => Some(n),
            Crossover::NotFound { .. } => None,
        }
    }
}

/// Linear scan over `2..=n_max`.
pub fn find_crossover(
    model: &AdvantageModel,
    criterion: CrossoverCriterion,
    n_max: usize,
) -> Result<Crossover> {
    if n_max > MAX_SCAN_QUBITS {
        return Err(Error::ScanBound(n_max));
    }
    let mut best = Crossover::NotFound { best_n: 2, best_value: f64::NEG_INFINITY };
    for n in 2..=n_max {
        let value = criterion.value(model, n);
        if value >= 1.0 {
            return Ok(Crossover::Found { n, value });
        }
        if let Crossover::NotFound { best_value, .. } = best {
            if value > best_value {
                best = Crossover::NotFound { best_n: n, best_value: value };
            }
        }
    }
    Ok(best)
}

/// Least-squares line `y = intercept + slope·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares. `None` with fewer than two distinct `x`.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LinearFit> {
    let len = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    Some(LinearFit { slope, intercept: mean_y - slope * mean_x })
}

/// Fits `log10(time)` against qubit count over samples with `n >= fit_from`.
/// Non-positive times are skipped.
pub fn fit_log10_slope(samples: &[(usize, f64)], fit_from: usize) -> Option<LinearFit> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(n, t)| n >= fit_from && t > 0.0)
        .map(|&(n, t)| (n as f64, libm::log10(t)))
        .collect();
    fit_line(&points)
}

/// Median of a non-empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) })
}
