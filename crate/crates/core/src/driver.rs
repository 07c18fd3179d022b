//! Amplitude computation by recursive decomposition.
//!
//! Each node of the decomposition tree is simplified, then either evaluated
//! (T-count 0) or split by [`decompose`]. Traversal is depth-first with an
//! explicit stack. With several workers, the first few levels are expanded
//! breadth-first until there are enough subtrees, which then run on a rayon
//! pool. Exact scalars make the result independent of the traversal order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{circuit_to_diagram, Circuit, CircuitError, StateSpec};
use crate::decomp::{decompose, effective_alpha, DecompKind, StrategyKind};
use crate::graph::Diagram;
use crate::scalar::ExactScalar;
use crate::simplify::{full_simplify_with, SimplifyOptions};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("diagram has {0} open boundary wires; amplitudes need a closed diagram")]
    OpenBoundary(usize),
    #[error("diagram still has {0} non-Clifford spiders")]
    NonClifford(usize),
    #[error("Clifford diagram did not reduce to a scalar ({0} spiders left)")]
    Irreducible(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("leaf budget of {budget} exhausted after {elapsed:?}")]
    BudgetExceeded { budget: u64, elapsed: Duration },
}

/// One decomposition applied during a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub depth: usize,
    pub kind: DecompKind,
    pub t_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    /// T-count of the closed diagram as given, before graph-like conversion.
    pub initial_t: usize,
    /// T-count after the first simplification of the root.
    pub reduced_t: usize,
    /// Leaves of the decomposition tree, including branches pruned as zero.
    pub leaf_terms: u64,
    pub decompositions_by_kind: BTreeMap<DecompKind, u64>,
    pub max_depth: usize,
    pub wall_time: Duration,
    /// `log₂(leaf_terms) / initial_t`, absent when `initial_t = 0`.
    pub effective_alpha: Option<f64>,
    pub trace: Option<Vec<TraceEntry>>,
}

impl RunStats {
    pub fn decompositions(&self) -> u64 {
        self.decompositions_by_kind.values().sum()
    }

    /// A tree where every internal node has `b` children has `1 + Σ(b − 1)` leaves.
    pub fn leaf_accounting_ok(&self) -> bool {
        let expect: u64 =
            1 + self.decompositions_by_kind.iter().map(|(k, &n)| n * (k.branches() as u64 - 1)).sum::<u64>();
        expect == self.leaf_terms
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub amplitude: ExactScalar,
    pub stats: RunStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    pub strategy: StrategyKind,
    pub workers: usize,
    pub trace: bool,
    pub simplify: SimplifyOptions,
    /// Abort once this many leaves have been reached.
    pub max_leaves: Option<u64>,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { strategy: StrategyKind::CatsThenPartial, workers: 1, trace: false, simplify: SimplifyOptions::default(), max_leaves: None }
    }
}

/// The exact value of a closed Clifford diagram.
pub fn reduce_clifford_scalar(d: &Diagram) -> Result<ExactScalar, DriverError> {
    reduce_clifford_scalar_with(d, &SimplifyOptions::default())
}

fn reduce_clifford_scalar_with(d: &Diagram, opts: &SimplifyOptions) -> Result<ExactScalar, DriverError> {
    let mut d = if d.is_graph_like() { d.clone() } else { d.to_graph_like() };
    let open = d.inputs().len() + d.outputs().len();
    if open > 0 {
        return Err(DriverError::OpenBoundary(open));
    }
    if d.tcount() > 0 {
        return Err(DriverError::NonClifford(d.tcount()));
    }
    full_simplify_with(&mut d, opts, None);
    if d.scalar().is_zero() {
        return Ok(ExactScalar::zero());
    }
    if d.num_vertices() > 0 {
        return Err(DriverError::Irreducible(d.num_vertices()));
    }
    Ok(d.scalar())
}

/// State shared by all workers of one run.
struct Ctx<'a> {
    opts: &'a SimOptions,
    leaves: AtomicU64,
    start: Instant,
}

impl Ctx<'_> {
    fn charge(&self, n: u64) -> Result<(), DriverError> {
        let total = self.leaves.fetch_add(n, Ordering::Relaxed) + n;
        match self.opts.max_leaves {
            Some(budget) if total > budget => Err(DriverError::BudgetExceeded { budget, elapsed: self.start.elapsed() }),
            _ => Ok(()),
        }
    }
}

struct Node {
    d: Diagram,
    depth: usize,
}

struct Partial {
    sum: ExactScalar,
    leaves: u64,
    by_kind: BTreeMap<DecompKind, u64>,
    max_depth: usize,
    trace: Vec<TraceEntry>,
}

impl Partial {
    fn new() -> Partial {
        Partial { sum: ExactScalar::zero(), leaves: 0, by_kind: BTreeMap::new(), max_depth: 0, trace: Vec::new() }
    }

    fn merge(&mut self, other: Partial) {
        self.sum += other.sum;
        self.leaves += other.leaves;
        for (k, n) in other.by_kind {
            *self.by_kind.entry(k).or_default() += n;
        }
        self.max_depth = self.max_depth.max(other.max_depth);
        self.trace.extend(other.trace);
    }

    /// Simplifies `node` and either settles it as a leaf or returns its children.
    fn visit(&mut self, mut node: Node, ctx: &Ctx) -> Result<Vec<Node>, DriverError> {
        let opts = ctx.opts;
        let before = self.leaves;
        let children = self.expand(&mut node, opts)?;
        ctx.charge(self.leaves - before)?;
        Ok(children)
    }

    fn expand(&mut self, node: &mut Node, opts: &SimOptions) -> Result<Vec<Node>, DriverError> {
        self.max_depth = self.max_depth.max(node.depth);
        full_simplify_with(&mut node.d, &opts.simplify, None);
        if node.d.scalar().is_zero() {
            self.leaves += 1;
            return Ok(Vec::new());
        }
        let Some((kind, terms)) = decompose(&node.d, opts.strategy) else {
            self.sum += reduce_clifford_scalar_with(&node.d, &opts.simplify)?;
            self.leaves += 1;
            return Ok(Vec::new());
        };
        *self.by_kind.entry(kind).or_default() += 1;
        if opts.trace {
            self.trace.push(TraceEntry { depth: node.depth, kind, t_count: node.d.tcount() });
        }
        let mut children = Vec::with_capacity(terms.len());
        for t in terms {
            if t.weight.is_zero() {
                self.leaves += 1;
            } else {
                children.push(Node { d: t.into_weighted(), depth: node.depth + 1 });
            }
        }
        Ok(children)
    }

    fn dfs(&mut self, root: Node, ctx: &Ctx) -> Result<(), DriverError> {
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            let mut children = self.visit(node, ctx)?;
            // first term on top, so the traversal is left to right
            children.reverse();
            stack.extend(children);
        }
        Ok(())
    }
}

/// The amplitude of a closed diagram under `strategy`.
pub fn amplitude(d: &Diagram, strategy: StrategyKind, workers: usize) -> Result<SimResult, DriverError> {
    amplitude_with(d, &SimOptions { strategy, workers, ..SimOptions::default() })
}

pub fn amplitude_with(d: &Diagram, opts: &SimOptions) -> Result<SimResult, DriverError> {
    let start = Instant::now();
    let open = d.inputs().len() + d.outputs().len();
    if open > 0 {
        return Err(DriverError::OpenBoundary(open));
    }
    let initial_t = d.tcount();
    let mut root = if d.is_graph_like() { d.clone() } else { d.to_graph_like() };
    full_simplify_with(&mut root, &opts.simplify, None);
    let reduced_t = root.tcount();

    let ctx = Ctx { opts, leaves: AtomicU64::new(0), start };
    let mut acc = Partial::new();
    let root = Node { d: root, depth: 0 };
    let workers = opts.workers.max(1);
    if workers == 1 {
        acc.dfs(root, &ctx)?;
    } else {
        // breadth-first until there is enough work to share
        let target = 8 * workers;
        let mut frontier = std::collections::VecDeque::from([root]);
        while !frontier.is_empty() && frontier.len() < target {
            let node = frontier.pop_front().unwrap();
            frontier.extend(acc.visit(node, &ctx)?);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| DriverError::Pool(e.to_string()))?;
        let parts: Vec<Result<Partial, DriverError>> = pool.install(|| {
            frontier
                .into_iter()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|node| {
                    let mut p = Partial::new();
                    p.dfs(node, &ctx).map(|_| p)
                })
                .collect()
        });
        for p in parts {
            acc.merge(p?);
        }
    }

    let stats = RunStats {
        initial_t,
        reduced_t,
        leaf_terms: acc.leaves,
        decompositions_by_kind: acc.by_kind,
        max_depth: acc.max_depth,
        wall_time: start.elapsed(),
        effective_alpha: effective_alpha(initial_t, acc.leaves).ok(),
        trace: opts.trace.then_some(acc.trace),
    };
    Ok(SimResult { amplitude: acc.sum, stats })
}

/// `⟨output| C |input⟩`. The seed is accepted for reproducible bookkeeping;
/// the computation itself is deterministic and does not consume randomness.
pub fn run_simulation(
    circuit: &Circuit,
    input: &StateSpec,
    output: &StateSpec,
    strategy: StrategyKind,
    workers: usize,
    _seed: u64,
) -> Result<SimResult, DriverError> {
    run_simulation_with(circuit, input, output, &SimOptions { strategy, workers, ..SimOptions::default() })
}

pub fn run_simulation_with(
    circuit: &Circuit,
    input: &StateSpec,
    output: &StateSpec,
    opts: &SimOptions,
) -> Result<SimResult, DriverError> {
    let d = circuit_to_diagram(circuit, input, output)?;
    amplitude_with(&d, opts)
}
