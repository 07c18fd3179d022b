//! ZX-diagrams as open multigraphs.
//!
//! Raw diagrams may contain X-spiders, H-boxes, plain edges between spiders,
//! parallel edges and self-loops. [`Diagram::to_graph_like`] normalises them
//! into graph-like form (all spiders Z, spider–spider edges Hadamard, simple
//! graph). The rewrite engine and the decompositions work on graph-like
//! diagrams only and keep them graph-like via [`Diagram::add_edge_smart`].
//!
//! Semantics used throughout: a Z-spider with phase φ is
//! `|0..0⟩⟨0..0| + e^{iφ}|1..1⟩⟨1..1|`, an H-box and a Hadamard edge are the
//! normalised Hadamard matrix, and a closed graph-like diagram evaluates to
//!
//! ```text
//!   scalar · Σ_x  Π_v ω^{φ_v x_v} · Π_{(a,b) H-edge} (−1)^{x_a x_b} / √2
//! ```
//!
//! which is how every scalar constant in the rewrite rules is derived.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::ExactScalar;

/// Vertex identifier. Ids are allocated sequentially and never reused.
pub type V = usize;

/// A phase in units of π/4, reduced mod 8.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const T: Phase = Phase(1);
    pub const S: Phase = Phase(2);
    pub const PI: Phase = Phase(4);

    pub fn new(eighths: i64) -> Phase {
        Phase(eighths.rem_euclid(8) as u8)
    }

    /// The phase as a multiple of π/4, in `0..8`.
    pub fn eighths(self) -> u8 {
        self.0
    }

    /// A multiple of π/2.
    pub fn is_clifford(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Exactly 0 or π.
    pub fn is_pauli(self) -> bool {
        self.0.is_multiple_of(4)
    }

    /// An odd multiple of π/4.
    pub fn is_t_like(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 8)
    }
}

impl std::ops::AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((8 - self.0) % 8)
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "π"),
            k => write!(f, "{}π/4", k),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VertexKind {
    Z(Phase),
    X(Phase),
    HBox,
    Boundary,
}

impl VertexKind {
    pub fn phase(self) -> Phase {
        match self {
            VertexKind::Z(p) | VertexKind::X(p) => p,
            _ => Phase::ZERO,
        }
    }

    pub fn is_spider(self) -> bool {
        matches!(self, VertexKind::Z(_) | VertexKind::X(_))
    }

    fn counts_as_t(self) -> bool {
        self.is_spider() && self.phase().is_t_like()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeKind {
    Plain,
    Hadamard,
}

impl EdgeKind {
    /// Composing two wire segments: H·H = identity.
    pub fn then(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Plain
        } else {
            EdgeKind::Hadamard
        }
    }

    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Plain => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Plain,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("arity mismatch: {outputs} outputs composed with {inputs} inputs")]
    ArityMismatch { outputs: usize, inputs: usize },
    #[error("malformed diagram text at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct VData {
    kind: VertexKind,
    /// Incident edge ends. A self-loop appears once.
    nbrs: Vec<(V, EdgeKind)>,
}

/// An open ZX-diagram with an exact global scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    verts: Vec<Option<VData>>,
    live: usize,
    tcount: usize,
    inputs: Vec<V>,
    outputs: Vec<V>,
    scalar: ExactScalar,
}

impl Default for Diagram {
    fn default() -> Self {
        Self::new()
    }
}

impl Diagram {
    pub fn new() -> Diagram {
        Diagram {
            verts: Vec::new(),
            live: 0,
            tcount: 0,
            inputs: Vec::new(),
            outputs: Vec::new(),
            scalar: ExactScalar::one(),
        }
    }

    /// `n` bare wires.
    pub fn identity(n: usize) -> Diagram {
        let mut d = Diagram::new();
        for _ in 0..n {
            let i = d.add_vertex(VertexKind::Boundary);
            let o = d.add_vertex(VertexKind::Boundary);
            d.add_edge(i, o, EdgeKind::Plain);
            d.inputs.push(i);
            d.outputs.push(o);
        }
        d
    }

    /// A single spider with the given numbers of input and output legs.
    pub fn spider(kind: VertexKind, n_in: usize, n_out: usize) -> Diagram {
        let mut d = Diagram::new();
        let s = d.add_vertex(kind);
        for _ in 0..n_in {
            let b = d.add_vertex(VertexKind::Boundary);
            d.add_edge(b, s, EdgeKind::Plain);
            d.inputs.push(b);
        }
        for _ in 0..n_out {
            let b = d.add_vertex(VertexKind::Boundary);
            d.add_edge(s, b, EdgeKind::Plain);
            d.outputs.push(b);
        }
        d
    }

    /// A bare scalar.
    pub fn scalar_diagram(s: ExactScalar) -> Diagram {
        let mut d = Diagram::new();
        d.scalar = s;
        d
    }

    /// `|00⟩ + |11⟩` as two connected outputs.
    pub fn cap() -> Diagram {
        let mut d = Diagram::new();
        let a = d.add_vertex(VertexKind::Boundary);
        let b = d.add_vertex(VertexKind::Boundary);
        d.add_edge(a, b, EdgeKind::Plain);
        d.outputs = vec![a, b];
        d
    }

    /// `⟨00| + ⟨11|` as two connected inputs.
    pub fn cup() -> Diagram {
        let mut d = Diagram::cap();
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d
    }

    // ------------------------------------------------------------------
    // queries

    pub fn scalar(&self) -> ExactScalar {
        self.scalar
    }

    pub fn scalar_mut(&mut self) -> &mut ExactScalar {
        &mut self.scalar
    }

    pub fn set_scalar(&mut self, s: ExactScalar) {
        self.scalar = s;
    }

    pub fn inputs(&self) -> &[V] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[V] {
        &self.outputs
    }

    pub fn set_inputs(&mut self, inputs: Vec<V>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<V>) {
        self.outputs = outputs;
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    /// One past the largest id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.verts.len()
    }

    /// Number of spiders with an odd-multiple-of-π/4 phase. O(1).
    pub fn tcount(&self) -> usize {
        self.tcount
    }

    pub fn contains(&self, v: V) -> bool {
        self.verts.get(v).is_some_and(|x| x.is_some())
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.verts.iter().enumerate().filter_map(|(i, x)| x.as_ref().map(|_| i))
    }

    fn data(&self, v: V) -> &VData {
        self.verts[v].as_ref().unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    fn data_mut(&mut self, v: V) -> &mut VData {
        self.verts[v].as_mut().unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    pub fn kind(&self, v: V) -> VertexKind {
        self.data(v).kind
    }

    pub fn phase(&self, v: V) -> Phase {
        self.data(v).kind.phase()
    }

    pub fn is_z(&self, v: V) -> bool {
        matches!(self.kind(v), VertexKind::Z(_))
    }

    pub fn is_boundary(&self, v: V) -> bool {
        matches!(self.kind(v), VertexKind::Boundary)
    }

    /// Incident edge ends (a self-loop is listed once).
    pub fn incident(&self, v: V) -> &[(V, EdgeKind)] {
        &self.data(v).nbrs
    }

    pub fn neighbors(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.data(v).nbrs.iter().map(|&(w, _)| w)
    }

    pub fn neighbor_vec(&self, v: V) -> Vec<V> {
        self.neighbors(v).collect()
    }

    /// Number of incident edges; on simple graphs the number of neighbours.
    pub fn degree(&self, v: V) -> usize {
        self.data(v).nbrs.len()
    }

    /// Number of wire ends at `v` (self-loops count twice).
    pub fn arity(&self, v: V) -> usize {
        self.data(v).nbrs.iter().map(|&(w, _)| if w == v { 2 } else { 1 }).sum()
    }

    pub fn edge_kind(&self, v: V, w: V) -> Option<EdgeKind> {
        self.data(v).nbrs.iter().find(|&&(x, _)| x == w).map(|&(_, e)| e)
    }

    pub fn connected(&self, v: V, w: V) -> bool {
        self.edge_kind(v, w).is_some()
    }

    /// A spider none of whose neighbours is a boundary.
    pub fn is_internal(&self, v: V) -> bool {
        self.kind(v).is_spider() && self.neighbors(v).all(|w| !self.is_boundary(w))
    }

    /// All edges as `(a, b, kind)` with `a <= b`, each multi-edge listed once per copy.
    pub fn edges(&self) -> Vec<(V, V, EdgeKind)> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for &(w, e) in self.incident(v) {
                if v <= w {
                    out.push((v, w, e));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Recount of odd-phase spiders from scratch.
    pub fn recount_t(&self) -> usize {
        self.vertices().filter(|&v| self.kind(v).counts_as_t()).count()
    }

    pub fn t_spiders(&self) -> impl Iterator<Item = V> + '_ {
        self.vertices().filter(|&v| self.kind(v).counts_as_t())
    }

    // ------------------------------------------------------------------
    // raw mutation

    pub fn add_vertex(&mut self, kind: VertexKind) -> V {
        let v = self.verts.len();
        self.verts.push(Some(VData { kind, nbrs: Vec::new() }));
        self.live += 1;
        if kind.counts_as_t() {
            self.tcount += 1;
        }
        v
    }

    pub fn add_z(&mut self, phase: Phase) -> V {
        self.add_vertex(VertexKind::Z(phase))
    }

    pub fn set_kind(&mut self, v: V, kind: VertexKind) {
        let old = self.kind(v);
        if old.counts_as_t() {
            self.tcount -= 1;
        }
        if kind.counts_as_t() {
            self.tcount += 1;
        }
        self.data_mut(v).kind = kind;
    }

    pub fn set_phase(&mut self, v: V, p: Phase) {
        let kind = match self.kind(v) {
            VertexKind::Z(_) => VertexKind::Z(p),
            VertexKind::X(_) => VertexKind::X(p),
            k => panic!("vertex {v} of kind {k:?} has no phase"),
        };
        self.set_kind(v, kind);
    }

    pub fn add_to_phase(&mut self, v: V, p: Phase) {
        let cur = self.phase(v);
        self.set_phase(v, cur + p);
    }

    /// Adds an edge without any normalisation (parallel edges and loops allowed).
    pub fn add_edge(&mut self, v: V, w: V, e: EdgeKind) {
        self.data_mut(v).nbrs.push((w, e));
        if v != w {
            self.data_mut(w).nbrs.push((v, e));
        }
    }

    /// Removes one edge between `v` and `w`, returning its kind.
    pub fn remove_edge(&mut self, v: V, w: V) -> Option<EdgeKind> {
        let nv = &mut self.data_mut(v).nbrs;
        let pos = nv.iter().position(|&(x, _)| x == w)?;
        let (_, e) = nv.swap_remove(pos);
        if v != w {
            let nw = &mut self.data_mut(w).nbrs;
            if let Some(p) = nw.iter().position(|&(x, k)| x == v && k == e) {
                nw.swap_remove(p);
            }
        }
        Some(e)
    }

    pub fn set_edge_kind(&mut self, v: V, w: V, e: EdgeKind) {
        for x in self.data_mut(v).nbrs.iter_mut() {
            if x.0 == w {
                x.1 = e;
                break;
            }
        }
        for x in self.data_mut(w).nbrs.iter_mut() {
            if x.0 == v {
                x.1 = e;
                break;
            }
        }
    }

    /// Removes a vertex and all its edges.
    pub fn remove_vertex(&mut self, v: V) {
        let data = self.verts[v].take().unwrap_or_else(|| panic!("vertex {v} does not exist"));
        self.live -= 1;
        if data.kind.counts_as_t() {
            self.tcount -= 1;
        }
        for (w, _) in data.nbrs {
            if w != v {
                if let Some(d) = self.verts[w].as_mut() {
                    d.nbrs.retain(|&(x, _)| x != v);
                }
            }
        }
    }

    // ------------------------------------------------------------------
    // graph-like mutation

    /// Adds an edge while keeping the diagram graph-like.
    ///
    /// * a plain edge between two Z-spiders fuses `w` into `v`;
    /// * a second Hadamard edge between two Z-spiders cancels the first (factor 1/2);
    /// * a Hadamard self-loop adds π to the phase (factor 1/√2);
    /// * a plain self-loop on a Z-spider is dropped.
    ///
    /// Edges touching boundaries or other non-Z vertices are added as is.
    pub fn add_edge_smart(&mut self, v: V, w: V, e: EdgeKind) {
        let both_z = self.is_z(v) && self.is_z(w);
        if !both_z {
            self.add_edge(v, w, e);
            return;
        }
        if v == w {
            if e == EdgeKind::Hadamard {
                self.add_to_phase(v, Phase::PI);
                self.scalar.mul_sqrt2_pow(-1);
            }
            return;
        }
        match e {
            EdgeKind::Plain => self.fuse_into(v, w),
            EdgeKind::Hadamard => match self.edge_kind(v, w) {
                Some(EdgeKind::Hadamard) => {
                    self.remove_edge(v, w);
                    self.scalar.mul_sqrt2_pow(-2);
                }
                Some(EdgeKind::Plain) => {
                    // v and w are one spider with an extra H self-loop
                    self.remove_edge(v, w);
                    self.fuse_into(v, w);
                    self.add_to_phase(v, Phase::PI);
                    self.scalar.mul_sqrt2_pow(-1);
                }
                None => self.add_edge(v, w, EdgeKind::Hadamard),
            },
        }
    }

    /// Multiplies the semantics by `(−1)^{x_v x_w}`: toggles a Hadamard edge and
    /// compensates its 1/√2.
    pub fn toggle_phase_edge(&mut self, v: V, w: V) {
        self.add_edge_smart(v, w, EdgeKind::Hadamard);
        self.scalar.mul_sqrt2_pow(1);
    }

    /// Fuses Z-spider `w` into Z-spider `v` (their connection, if any, is
    /// treated as plain).
    pub fn fuse_into(&mut self, v: V, w: V) {
        debug_assert!(self.is_z(v) && self.is_z(w) && v != w);
        let nbrs = std::mem::take(&mut self.data_mut(w).nbrs);
        let pw = self.phase(w);
        // detach w completely first, then re-attach its edges to v
        for &(x, _) in &nbrs {
            if x != w {
                if let Some(d) = self.verts[x].as_mut() {
                    if let Some(p) = d.nbrs.iter().position(|&(y, _)| y == w) {
                        d.nbrs.swap_remove(p);
                    }
                }
            }
        }
        self.remove_vertex(w);
        self.add_to_phase(v, pw);
        for (x, e) in nbrs {
            if x == w {
                // self-loop on w becomes a self-loop on v
                self.add_edge_smart(v, v, e);
            } else if x == v {
                // the v–w connection; plain is absorbed by the fusion
                if e == EdgeKind::Hadamard {
                    self.add_edge_smart(v, v, e);
                }
            } else {
                self.add_edge_smart(v, x, e);
            }
        }
    }

    // ------------------------------------------------------------------
    // composition

    /// Copies `other` into `self` with fresh ids; returns the id map.
    fn absorb(&mut self, other: &Diagram) -> HashMap<V, V> {
        let mut map = HashMap::new();
        for v in other.vertices() {
            map.insert(v, self.add_vertex(other.kind(v)));
        }
        for (a, b, e) in other.edges() {
            self.add_edge(map[&a], map[&b], e);
        }
        self.scalar *= other.scalar;
        map
    }

    /// The adjoint map: phases and scalar conjugated, inputs and outputs swapped.
    pub fn adjoint(&self) -> Diagram {
        let mut d = self.clone();
        for v in self.vertices() {
            match d.kind(v) {
                VertexKind::Z(p) => d.set_kind(v, VertexKind::Z(-p)),
                VertexKind::X(p) => d.set_kind(v, VertexKind::X(-p)),
                _ => {}
            }
        }
        d.scalar = d.scalar.conj();
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d
    }

    /// Side-by-side composition.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let mut d = self.clone();
        let map = d.absorb(other);
        d.inputs.extend(other.inputs.iter().map(|v| map[v]));
        d.outputs.extend(other.outputs.iter().map(|v| map[v]));
        d
    }

    /// Sequential composition: `self` first, then `next` (outputs of `self`
    /// are plugged into the inputs of `next`).
    pub fn compose(&self, next: &Diagram) -> Result<Diagram, GraphError> {
        if self.outputs.len() != next.inputs.len() {
            return Err(GraphError::ArityMismatch {
                outputs: self.outputs.len(),
                inputs: next.inputs.len(),
            });
        }
        let mut d = self.clone();
        let map = d.absorb(next);
        let outs = std::mem::take(&mut d.outputs);
        for (o, i) in outs.into_iter().zip(next.inputs.iter().map(|v| map[v])) {
            d.plug(o, i);
        }
        d.outputs = next.outputs.iter().map(|v| map[v]).collect();
        Ok(d)
    }

    /// Joins two boundary vertices into a single wire and removes them.
    fn plug(&mut self, o: V, i: V) {
        let (a, ea) = self.incident(o)[0];
        if a == i {
            // the two ends were already wired to each other: a closed loop
            self.remove_vertex(o);
            self.remove_vertex(i);
            if ea == EdgeKind::Plain {
                self.scalar *= ExactScalar::from_int(2);
            } else {
                self.scalar = ExactScalar::zero();
            }
            return;
        }
        let (b, eb) = self.incident(i)[0];
        self.remove_vertex(o);
        self.remove_vertex(i);
        self.add_edge(a, b, ea.then(eb));
    }

    /// Caps every open wire with the given single-wire states/effects, which
    /// must be 1-output diagrams (states) for inputs and 1-input diagrams
    /// (effects) for outputs.
    pub fn plug_boundaries(&self, states: &[Diagram], effects: &[Diagram]) -> Result<Diagram, GraphError> {
        let mut prep = Diagram::new();
        for s in states {
            prep = prep.tensor(s);
        }
        let mut post = Diagram::new();
        for e in effects {
            post = post.tensor(e);
        }
        prep.compose(self)?.compose(&post)
    }

    // ------------------------------------------------------------------
    // normalisation

    /// Converts to graph-like form without changing the linear map.
    pub fn to_graph_like(&self) -> Diagram {
        let mut d = self.clone();

        // colour change: X(α) is Z(α) with a Hadamard on every leg
        for v in d.vertices().collect::<Vec<_>>() {
            if let VertexKind::X(p) = d.kind(v) {
                d.set_kind(v, VertexKind::Z(p));
                for x in d.data_mut(v).nbrs.iter_mut() {
                    if x.0 != v {
                        x.1 = x.1.toggled();
                    }
                }
                let ws: Vec<V> = d.neighbors(v).filter(|&w| w != v).collect();
                for w in ws {
                    for x in d.data_mut(w).nbrs.iter_mut() {
                        if x.0 == v {
                            x.1 = x.1.toggled();
                        }
                    }
                }
            }
        }

        // H-boxes become Hadamard edges
        for h in d.vertices().collect::<Vec<_>>() {
            if d.kind(h) != VertexKind::HBox {
                continue;
            }
            let legs = d.incident(h).to_vec();
            d.remove_vertex(h);
            match legs.as_slice() {
                [(x, e)] if *x == h => {
                    // trace of H (plain loop) is 0, trace of H·H is 2
                    d.scalar *= if *e == EdgeKind::Plain { ExactScalar::zero() } else { ExactScalar::from_int(2) };
                }
                [(a, ea), (b, eb)] => {
                    d.add_edge(*a, *b, ea.then(*eb).then(EdgeKind::Hadamard));
                }
                _ => panic!("H-box {h} must have exactly two legs"),
            }
        }

        // rebuild edges with plain Z–Z connections fused (union–find)
        let edges = d.edges();
        let n = d.verts.len();
        let mut parent: Vec<V> = (0..n).collect();
        fn find(p: &mut [V], mut x: V) -> V {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b, e) in &edges {
            if e == EdgeKind::Plain && d.is_z(a) && d.is_z(b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    parent[hi] = lo;
                }
            }
        }
        for v in d.vertices().collect::<Vec<_>>() {
            d.data_mut(v).nbrs.clear();
        }
        for v in d.vertices().collect::<Vec<_>>() {
            let r = find(&mut parent, v);
            if r != v {
                let p = d.phase(v);
                d.add_to_phase(r, p);
                d.remove_vertex(v);
            }
        }
        for (a, b, e) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb && e == EdgeKind::Plain && d.is_z(ra) {
                continue;
            }
            d.add_edge_smart(ra, rb, e);
        }
        d
    }

    /// Checks the graph-like invariants; returns a description of the first violation.
    pub fn graph_like_violation(&self) -> Option<String> {
        for v in self.vertices() {
            match self.kind(v) {
                VertexKind::Z(_) => {}
                VertexKind::Boundary => {
                    if self.degree(v) != 1 {
                        return Some(format!("boundary {v} has degree {}", self.degree(v)));
                    }
                    continue;
                }
                k => return Some(format!("vertex {v} has kind {k:?}")),
            }
            let mut seen = Vec::new();
            for &(w, e) in self.incident(v) {
                if w == v {
                    return Some(format!("self-loop on {v}"));
                }
                if seen.contains(&w) {
                    return Some(format!("parallel edges {v}–{w}"));
                }
                seen.push(w);
                if self.is_z(w) && e != EdgeKind::Hadamard {
                    return Some(format!("plain spider edge {v}–{w}"));
                }
            }
        }
        None
    }

    pub fn is_graph_like(&self) -> bool {
        self.graph_like_violation().is_none()
    }

    // ------------------------------------------------------------------
    // text format

    /// Line-based serialisation:
    ///
    /// ```text
    /// v <id> Z|X|H|B <phase-eighths>
    /// e <id> <id> P|H
    /// in <id> <id> ...
    /// out <id> <id> ...
    /// scalar 2^(p/2) * (a + b*w + c*w^2 + d*w^3)
    /// ```
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for v in self.vertices() {
            let (tag, p) = match self.kind(v) {
                VertexKind::Z(p) => ('Z', p.eighths()),
                VertexKind::X(p) => ('X', p.eighths()),
                VertexKind::HBox => ('H', 0),
                VertexKind::Boundary => ('B', 0),
            };
            writeln!(s, "v {v} {tag} {p}").unwrap();
        }
        for (a, b, e) in self.edges() {
            writeln!(s, "e {a} {b} {}", if e == EdgeKind::Plain { 'P' } else { 'H' }).unwrap();
        }
        let ids = |xs: &[V]| xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(s, "in {}", ids(&self.inputs)).unwrap();
        writeln!(s, "out {}", ids(&self.outputs)).unwrap();
        writeln!(s, "scalar {}", self.scalar).unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Diagram, GraphError> {
        let mut d = Diagram::new();
        let mut ids: HashMap<usize, V> = HashMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| GraphError::Parse { line: ln + 1, msg: msg.to_string() };
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let id = |tok: Option<&str>, ids: &HashMap<usize, V>| -> Result<V, GraphError> {
                let n: usize = tok.ok_or_else(|| err("missing id"))?.parse().map_err(|_| err("bad id"))?;
                ids.get(&n).copied().ok_or_else(|| err("unknown vertex id"))
            };
            match tag {
                "v" => {
                    let n: usize = parts.next().ok_or_else(|| err("missing id"))?.parse().map_err(|_| err("bad id"))?;
                    let kind = parts.next().ok_or_else(|| err("missing kind"))?;
                    let p: i64 = parts.next().ok_or_else(|| err("missing phase"))?.parse().map_err(|_| err("bad phase"))?;
                    let kind = match kind {
                        "Z" => VertexKind::Z(Phase::new(p)),
                        "X" => VertexKind::X(Phase::new(p)),
                        "H" => VertexKind::HBox,
                        "B" => VertexKind::Boundary,
                        _ => return Err(err("unknown vertex kind")),
                    };
                    if ids.contains_key(&n) {
                        return Err(err("duplicate vertex id"));
                    }
                    // keep the original ids when they are dense and increasing
                    while d.verts.len() < n {
                        d.verts.push(None);
                    }
                    let v = d.add_vertex(kind);
                    ids.insert(n, v);
                }
                "e" => {
                    let a = id(parts.next(), &ids)?;
                    let b = id(parts.next(), &ids)?;
                    let e = match parts.next() {
                        Some("P") => EdgeKind::Plain,
                        Some("H") => EdgeKind::Hadamard,
                        _ => return Err(err("edge kind must be P or H")),
                    };
                    d.add_edge(a, b, e);
                }
                "in" | "out" => {
                    let mut list = Vec::new();
                    for tok in parts {
                        list.push(id(Some(tok), &ids)?);
                    }
                    if tag == "in" {
                        d.inputs = list;
                    } else {
                        d.outputs = list;
                    }
                }
                "scalar" => {
                    let rest = line["scalar".len()..].trim();
                    d.scalar = rest.parse().map_err(|_| err("bad scalar"))?;
                }
                _ => return Err(err("unknown record")),
            }
        }
        Ok(d)
    }
}
