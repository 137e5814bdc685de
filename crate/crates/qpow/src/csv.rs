//! CSV writers for the advantage sweep, benchmark records and shot histograms.

use std::io::{self, Write};

use qpow_core::{AdvantageRow, Histogram};

use crate::bench::BenchRecord;

pub const ADVANTAGE_HEADER: &str = "n,classical_time_model,quantum_time_model,speed_ratio,accuracy,advantage";
pub const BENCH_HEADER: &str = "n,wall_time_s,reps";
pub const HISTOGRAM_HEADER: &str = "bitstring,count";

pub fn write_advantage<W: Write>(mut out: W, rows: &[AdvantageRow]) -> io::Result<()> {
    writeln!(out, "{ADVANTAGE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.classical_time, r.quantum_time, r.speed_ratio, r.accuracy, r.advantage
        )?;
    }
    Ok(())
}

pub fn write_bench<W: Write>(mut out: W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{}", r.n_qubits, r.wall_time, r.repetitions)?;
    }
    Ok(())
}

/// Non-empty bins only, in basis-index order.
pub fn write_histogram<W: Write>(mut out: W, histogram: &Histogram) -> io::Result<()> {
    writeln!(out, "{HISTOGRAM_HEADER}")?;
    for (bits, count) in histogram.iter_bits() {
        writeln!(out, "{bits},{count}")?;
    }
    Ok(())
}
