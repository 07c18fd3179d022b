//! Benchmark sweeps and CSV records behind the `catzx` binary.

use std::io;

use catzx::circuit::{circuit_to_diagram, Basis, Circuit, CircuitError, StateSpec};
use catzx::decomp::StrategyKind;
use catzx::driver::{amplitude_with, DriverError, SimOptions};
use catzx::generate::{gen_hidden_shift, gen_random_cliffordt};
use serde::{Deserialize, Serialize};

/// One (circuit, strategy) run. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub id: String,
    pub qubits: usize,
    pub t_count: usize,
    pub strategy: String,
    pub seed: u64,
    pub wall_ms: f64,
    pub leaf_terms: u64,
    /// Empty for T-count 0.
    pub effective_alpha: Option<f64>,
    pub amp_re: f64,
    pub amp_im: f64,
}

pub const CSV_HEADER: &str = "id,qubits,t_count,strategy,seed,wall_ms,leaf_terms,effective_alpha,amp_re,amp_im";

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub strategies: Vec<StrategyKind>,
    pub seed: u64,
    pub workers: usize,
    pub max_leaves: Option<u64>,
}

pub fn run_record(
    id: String,
    c: &Circuit,
    input: &StateSpec,
    output: &StateSpec,
    strategy: StrategyKind,
    seed: u64,
    sweep: &SweepOptions,
) -> Result<BenchRecord, DriverError> {
    let d = circuit_to_diagram(c, input, output)?;
    let opts = SimOptions { strategy, workers: sweep.workers, max_leaves: sweep.max_leaves, ..SimOptions::default() };
    let r = amplitude_with(&d, &opts)?;
    let z = r.amplitude.to_complex();
    Ok(BenchRecord {
        id,
        qubits: c.qubits,
        t_count: c.t_count(),
        strategy: strategy.name().to_string(),
        seed,
        wall_ms: r.stats.wall_time.as_secs_f64() * 1e3,
        leaf_terms: r.stats.leaf_terms,
        effective_alpha: r.stats.effective_alpha,
        amp_re: z.re,
        amp_im: z.im,
    })
}

/// T-counts `1, 1 + step, …` up to `tmax`, `reps` random Pauli-exponential
/// circuits each, amplitude `⟨0…0|C|0…0⟩`. Circuit `k` of the sweep uses seed
/// `seed + k`.
pub fn cliffordt_sweep(
    qubits: usize,
    tmax: usize,
    step: usize,
    reps: usize,
    sweep: &SweepOptions,
    mut sink: impl FnMut(BenchRecord) -> io::Result<()>,
) -> Result<(), SweepError> {
    if step == 0 || tmax == 0 {
        return Err(SweepError::Range("--tmax and --step must be positive".into()));
    }
    let zero = StateSpec::uniform(qubits, Basis::Zero);
    let mut k = 0u64;
    for t in (1..=tmax).step_by(step) {
        for rep in 0..reps {
            let seed = sweep.seed + k;
            k += 1;
            let c = gen_random_cliffordt(qubits, t, seed)?;
            for &s in &sweep.strategies {
                let id = format!("cliffordt-q{qubits}-t{t}-r{rep}");
                sink(run_record(id, &c, &zero, &zero, s, seed, sweep)?)?;
            }
        }
    }
    Ok(())
}

/// `count` hidden-shift circuits, amplitude at the shift. Circuit `k` uses
/// seed `seed + k`.
pub fn hiddenshift_sweep(
    qubits: usize,
    ccz: usize,
    count: usize,
    sweep: &SweepOptions,
    mut sink: impl FnMut(BenchRecord) -> io::Result<()>,
) -> Result<(), SweepError> {
    let zero = StateSpec::uniform(qubits, Basis::Zero);
    for k in 0..count {
        let seed = sweep.seed + k as u64;
        let (c, shift) = gen_hidden_shift(qubits, ccz, seed)?;
        let out = StateSpec::from_bits(&shift);
        for &s in &sweep.strategies {
            let id = format!("hiddenshift-q{qubits}-c{ccz}-n{k}");
            sink(run_record(id, &c, &zero, &out, s, seed, sweep)?)?;
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("invalid range: {0}")]
    Range(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Mean and sample variance of `log₁₀(wall time)` per strategy, in the
/// order strategies first appear.
pub fn log_runtime_summary(records: &[BenchRecord]) -> Vec<(String, usize, f64, f64)> {
    let mut names: Vec<String> = Vec::new();
    for r in records {
        if !names.contains(&r.strategy) {
            names.push(r.strategy.clone());
        }
    }
    names
        .into_iter()
        .map(|name| {
            // clamp at 1 µs so a zero timer reading stays finite
            let xs: Vec<f64> =
                records.iter().filter(|r| r.strategy == name).map(|r| (r.wall_ms.max(1e-3) / 1e3).log10()).collect();
            let n = xs.len();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = if n > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
            (name, n, mean, var)
        })
        .collect()
}

pub fn csv_writer<W: io::Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(true).from_writer(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(strategy: &str, wall_ms: f64) -> BenchRecord {
        BenchRecord {
            id: "x".into(),
            qubits: 4,
            t_count: 3,
            strategy: strategy.into(),
            seed: 1,
            wall_ms,
            leaf_terms: 2,
            effective_alpha: Some(1.0 / 3.0),
            amp_re: 0.5,
            amp_im: -0.25,
        }
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let rs = vec![rec("cats", 1.5), BenchRecord { effective_alpha: None, ..rec("bss", 10.0) }];
        let mut w = csv_writer(Vec::new());
        for r in &rs {
            w.serialize(r).unwrap();
        }
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        let back: Vec<BenchRecord> =
            csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(back, rs);
    }

    #[test]
    fn summary_statistics() {
        let rs = vec![rec("cats", 10.0), rec("cats", 1000.0), rec("bss", 100.0)];
        let s = log_runtime_summary(&rs);
        assert_eq!(s[0].0, "cats");
        assert!((s[0].2 - (-1.0)).abs() < 1e-12);
        assert!((s[0].3 - 2.0).abs() < 1e-12);
        assert_eq!((s[1].1, s[1].3), (1, 0.0));
    }

    #[test]
    fn sweep_sizes() {
        let sweep = SweepOptions { strategies: vec![StrategyKind::CatsThenPartial], seed: 0, workers: 1, max_leaves: None };
        let mut n = 0;
        cliffordt_sweep(4, 7, 3, 2, &sweep, |r| {
            assert!(r.t_count <= 7);
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 6);
        let mut n = 0;
        hiddenshift_sweep(6, 2, 0, &sweep, |_| {
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 0);
    }
}
