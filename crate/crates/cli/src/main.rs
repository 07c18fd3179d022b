use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use catzx::circuit::{circuit_to_diagram, circuit_to_open_diagram, Circuit, StateSpec};
use catzx::decomp::StrategyKind;
use catzx::driver::{run_simulation_with, SimOptions, SimResult};
use catzx::generate::{gen_hidden_shift, gen_random_cliffordt};
use catzx::qasm::{parse_qasm, to_qasm};
use catzx::simplify::SimplifyOptions;
use catzx_cli::{cliffordt_sweep, csv_writer, hiddenshift_sweep, log_runtime_summary, BenchRecord, SweepOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "catzx", version, about = "Exact amplitudes of Clifford+T circuits via ZX-diagram decomposition")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one amplitude <out|C|in>.
    Simulate(SimulateArgs),
    /// Run a benchmark sweep and write CSV records.
    #[command(subcommand)]
    Bench(BenchCmd),
    /// Write a benchmark circuit as OpenQASM (or as a diagram).
    #[command(subcommand)]
    Generate(GenerateCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Cats,
    Bss,
    Naive,
}

impl From<Strategy> for StrategyKind {
    fn from(s: Strategy) -> StrategyKind {
        match s {
            Strategy::Cats => StrategyKind::CatsThenPartial,
            Strategy::Bss => StrategyKind::Bss,
            Strategy::Naive => StrategyKind::Naive,
        }
    }
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Abort a run after this many leaves.
    #[arg(long)]
    max_leaves: Option<u64>,
    /// Also pivot Pauli spiders next to non-Clifford spiders, via phase gadgets.
    #[arg(long)]
    pivot_gadget: bool,
    /// Merge phase gadgets with equal support.
    #[arg(long)]
    gadget_fusion: bool,
}

impl EngineArgs {
    fn simplify(&self) -> SimplifyOptions {
        SimplifyOptions { pivot_gadget: self.pivot_gadget, gadget_fusion: self.gadget_fusion }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    qasm: PathBuf,
    /// Input product state over {0,1,+,-}.
    #[arg(long = "in")]
    input: StateSpec,
    /// Output effect over {0,1,+,-}.
    #[arg(long = "out")]
    output: StateSpec,
    #[arg(long, value_enum, default_value = "cats")]
    strategy: Strategy,
    /// Accepted for reproducible invocations; the computation is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the closed diagram before simplification.
    #[arg(long)]
    dump_diagram: bool,
    /// Print every decomposition applied.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct BenchCommon {
    /// One or more strategies, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cats")]
    strategy: Vec<Strategy>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Random Pauli-exponential circuits at T-counts 1, 1+step, ... up to tmax.
    Cliffordt {
        #[arg(long, default_value_t = 20)]
        qubits: usize,
        #[arg(long, default_value_t = 43)]
        tmax: usize,
        #[arg(long, default_value_t = 3)]
        step: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[command(flatten)]
        common: BenchCommon,
    },
    /// Hidden-shift circuits, amplitude at the shift.
    Hiddenshift {
        #[arg(long, default_value_t = 20)]
        qubits: usize,
        #[arg(long, default_value_t = 16)]
        ccz: usize,
        #[arg(long, default_value_t = 125)]
        count: usize,
        #[command(flatten)]
        common: BenchCommon,
    },
}

#[derive(Subcommand)]
enum GenerateCmd {
    Cliffordt {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the open diagram instead of QASM.
        #[arg(long)]
        diagram: bool,
    },
    Hiddenshift {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        ccz: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        diagram: bool,
    },
}

/// Failure after argument parsing: exit 2 for bad input, 3 for runtime errors.
enum Failure {
    Usage(String),
    Runtime(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Bench(b) => bench(b),
        Cmd::Generate(g) => generate(g),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let src = std::fs::read_to_string(&a.qasm).map_err(|e| Failure::Usage(format!("{}: {e}", a.qasm.display())))?;
    let c = parse_qasm(&src).map_err(|e| Failure::Usage(format!("{}:{e}", a.qasm.display())))?;
    for (name, s) in [("--in", &a.input), ("--out", &a.output)] {
        if s.len() != c.qubits {
            return Err(Failure::Usage(format!("{name} has {} symbols but the circuit has {} qubits", s.len(), c.qubits)));
        }
    }
    if a.engine.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    if a.dump_diagram {
        let d = circuit_to_diagram(&c, &a.input, &a.output).map_err(|e| Failure::Usage(e.to_string()))?;
        print!("{}", d.to_text());
    }
    let opts = SimOptions {
        strategy: a.strategy.into(),
        workers: a.engine.workers,
        trace: a.trace,
        simplify: a.engine.simplify(),
        max_leaves: a.engine.max_leaves,
    };
    let r = run_simulation_with(&c, &a.input, &a.output, &opts).map_err(|e| Failure::Runtime(e.to_string()))?;
    print_result(&r, opts.strategy, a.seed);
    Ok(())
}

fn print_result(r: &SimResult, strategy: StrategyKind, seed: u64) {
    use std::fmt::Write as _;
    let mut o = String::new();
    let s = &r.stats;
    let z = r.amplitude.to_complex();
    writeln!(o, "strategy: {strategy}").unwrap();
    writeln!(o, "seed: {seed}").unwrap();
    writeln!(o, "exact: {}", r.amplitude).unwrap();
    writeln!(o, "amplitude: {:.12} {:+.12}i", z.re, z.im).unwrap();
    writeln!(o, "initial_t: {}", s.initial_t).unwrap();
    writeln!(o, "reduced_t: {}", s.reduced_t).unwrap();
    writeln!(o, "leaf_terms: {}", s.leaf_terms).unwrap();
    let kinds: Vec<String> = s.decompositions_by_kind.iter().map(|(k, n)| format!("{k}={n}")).collect();
    writeln!(o, "decompositions: {} [{}]", s.decompositions(), kinds.join(" ")).unwrap();
    writeln!(o, "max_depth: {}", s.max_depth).unwrap();
    writeln!(o, "wall_ms: {:.3}", s.wall_time.as_secs_f64() * 1e3).unwrap();
    match s.effective_alpha {
        Some(a) => writeln!(o, "effective_alpha: {a:.4}"),
        None => writeln!(o, "effective_alpha: -"),
    }
    .unwrap();
    if let Some(trace) = &s.trace {
        for t in trace {
            writeln!(o, "trace: depth={} kind={} t={}", t.depth, t.kind, t.t_count).unwrap();
        }
    }
    // a closed pipe (e.g. `| head`) is not an error
    let _ = io::stdout().lock().write_all(o.as_bytes());
}

fn bench(b: BenchCmd) -> Result<(), Failure> {
    let common = match &b {
        BenchCmd::Cliffordt { common, .. } | BenchCmd::Hiddenshift { common, .. } => common,
    };
    if common.engine.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    if common.engine.pivot_gadget || common.engine.gadget_fusion {
        return Err(Failure::Usage("simplifier flags are only available for `simulate`".into()));
    }
    let sweep = SweepOptions {
        strategies: common.strategy.iter().map(|&s| s.into()).collect(),
        seed: common.seed,
        workers: common.engine.workers,
        max_leaves: common.engine.max_leaves,
    };
    let out: Box<dyn Write> = match &common.output {
        Some(p) => Box::new(File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv_writer(BufWriter::new(out));
    let mut records: Vec<BenchRecord> = Vec::new();
    let mut sink = |r: BenchRecord| -> io::Result<()> {
        w.serialize(&r)?;
        w.flush()?;
        records.push(r);
        Ok(())
    };
    let res = match b {
        BenchCmd::Cliffordt { qubits, tmax, step, reps, .. } => cliffordt_sweep(qubits, tmax, step, reps, &sweep, &mut sink),
        BenchCmd::Hiddenshift { qubits, ccz, count, .. } => hiddenshift_sweep(qubits, ccz, count, &sweep, &mut sink),
    };
    if records.is_empty() && res.is_ok() {
        // the header is only written with the first record
        w.write_record(catzx_cli::CSV_HEADER.split(',')).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Runtime(e.to_string()))?;
    res.map_err(|e| match e {
        catzx_cli::SweepError::Range(_) | catzx_cli::SweepError::Circuit(_) => Failure::Usage(e.to_string()),
        _ => Failure::Runtime(e.to_string()),
    })?;
    for (name, n, mean, var) in log_runtime_summary(&records) {
        eprintln!("summary strategy={name} runs={n} mean_log10_s={mean:.4} var_log10_s={var:.4}");
    }
    Ok(())
}

fn generate(g: GenerateCmd) -> Result<(), Failure> {
    let (c, header, diagram): (Circuit, String, bool) = match g {
        GenerateCmd::Cliffordt { qubits, t, seed, diagram } => {
            let c = gen_random_cliffordt(qubits, t, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            (c, format!("cliffordt qubits={qubits} t={t} seed={seed}"), diagram)
        }
        GenerateCmd::Hiddenshift { qubits, ccz, seed, diagram } => {
            let (c, s) = gen_hidden_shift(qubits, ccz, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            let shift = StateSpec::from_bits(&s);
            (c, format!("hiddenshift qubits={qubits} ccz={ccz} seed={seed} shift={shift}"), diagram)
        }
    };
    if diagram {
        let d = circuit_to_open_diagram(&c).map_err(|e| Failure::Runtime(e.to_string()))?;
        print!("# {header}\n{}", d.to_text());
    } else {
        print!("// {header}\n{}", to_qasm(&c));
    }
    Ok(())
}
