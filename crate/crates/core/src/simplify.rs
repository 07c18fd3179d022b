//! Graph-like rewriting to the reduced form.
//!
//! After [`full_simplify`] a diagram satisfies, for internal spiders
//! (spiders with no boundary neighbour):
//!
//! 1. no two Clifford spiders are adjacent;
//! 2. no Clifford spider has arity ≤ 2;
//! 3. no spider has phase ±π/2.
//!
//! Every rule is exact: the global scalar is updated so the linear map is
//! unchanged. The constants are derived from the phase-polynomial reading
//! of graph-like diagrams documented in [`crate::graph`].

use std::fmt;

use thiserror::Error;

use crate::graph::{Diagram, EdgeKind, Phase, VertexKind, V};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Fuse,
    Identity,
    LocalComplement,
    Pivot,
    PivotGadget,
    CopyLeaf,
    PiPair,
    ScalarSpider,
    GadgetFusion,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Fuse => "fuse",
            Rule::Identity => "identity",
            Rule::LocalComplement => "lcomp",
            Rule::Pivot => "pivot",
            Rule::PivotGadget => "pivot_gadget",
            Rule::CopyLeaf => "copy",
            Rule::PiPair => "pi_pair",
            Rule::ScalarSpider => "scalar",
            Rule::GadgetFusion => "gadget_fusion",
        }
    }
}

/// One applied rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub vertices: Vec<V>,
    /// Factor the rule multiplied into the global scalar.
    pub scalar_delta: ExactScalar,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{} [{}] {}", self.rule.name(), vs.join(","), self.scalar_delta)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("{rule} does not apply at {vertices:?}: {reason}")]
    NoMatch { rule: &'static str, vertices: Vec<V>, reason: &'static str },
}

fn no_match(rule: Rule, vertices: &[V], reason: &'static str) -> RewriteError {
    RewriteError::NoMatch { rule: rule.name(), vertices: vertices.to_vec(), reason }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct SimplifyOptions {
    /// Pivot an internal Pauli spider with a non-Clifford neighbour by first
    /// moving the neighbour's phase onto a new gadget.
    pub pivot_gadget: bool,
    /// Merge phase gadgets with identical support.
    pub gadget_fusion: bool,
}


// ----------------------------------------------------------------------
// matching helpers

fn z_phase(d: &Diagram, v: V) -> Option<Phase> {
    match d.kind(v) {
        VertexKind::Z(p) => Some(p),
        _ => None,
    }
}

fn internal_z(d: &Diagram, v: V) -> bool {
    d.is_z(v) && d.neighbors(v).all(|w| d.is_z(w) && w != v)
}

/// Degree-1 spider, or the unique neighbour of one.
pub fn in_gadget(d: &Diagram, v: V) -> bool {
    if !d.is_z(v) {
        return false;
    }
    if d.degree(v) == 1 && d.is_z(d.incident(v)[0].0) {
        return true;
    }
    d.neighbors(v).any(|w| d.is_z(w) && d.degree(w) == 1)
}

/// Lexicographic measure that every rewrite strictly decreases.
fn measure(d: &Diagram) -> (usize, usize, usize) {
    let mut internal = 0;
    let mut total = 0;
    let mut plain = 0;
    for v in d.vertices() {
        if !d.is_z(v) {
            continue;
        }
        total += 1;
        if internal_z(d, v) {
            internal += 1;
        }
        if !in_gadget(d, v) {
            plain += 1;
        }
    }
    (internal, total, plain)
}

// ----------------------------------------------------------------------
// individual rules

/// Fuses two Z-spiders joined by a plain edge; `w` is merged into `v`.
pub fn fuse_spiders(d: &mut Diagram, v: V, w: V) -> Result<(), RewriteError> {
    if v == w || !d.is_z(v) || !d.is_z(w) || d.edge_kind(v, w) != Some(EdgeKind::Plain) {
        return Err(no_match(Rule::Fuse, &[v, w], "needs two Z-spiders joined by a plain edge"));
    }
    d.remove_edge(v, w);
    d.fuse_into(v, w);
    Ok(())
}

/// Removes a phase-0 spider of arity 2, joining its neighbours.
pub fn remove_identity(d: &mut Diagram, v: V) -> Result<(), RewriteError> {
    if z_phase(d, v) != Some(Phase::ZERO) || d.degree(v) != 2 || d.connected(v, v) {
        return Err(no_match(Rule::Identity, &[v], "needs a phase-0 spider with two distinct legs"));
    }
    let [(a, ea), (b, eb)] = [d.incident(v)[0], d.incident(v)[1]];
    if a == b {
        return Err(no_match(Rule::Identity, &[v], "both legs go to the same vertex"));
    }
    d.remove_vertex(v);
    let e = ea.then(eb);
    if d.is_z(a) && d.is_z(b) {
        d.add_edge_smart(a, b, e);
    } else {
        d.add_edge(a, b, e);
    }
    Ok(())
}

/// Local complementation about an internal ±π/2 spider.
pub fn local_complement(d: &mut Diagram, v: V) -> Result<(), RewriteError> {
    let s: i64 = match z_phase(d, v).map(|p| p.eighths()) {
        Some(2) => 1,
        Some(6) => -1,
        _ => return Err(no_match(Rule::LocalComplement, &[v], "phase must be ±π/2")),
    };
    if !internal_z(d, v) {
        return Err(no_match(Rule::LocalComplement, &[v], "spider must be internal"));
    }
    let ns = d.neighbor_vec(v);
    d.remove_vertex(v);
    let sc = d.scalar_mut();
    sc.mul_sqrt2_pow(1 - ns.len() as i32);
    sc.mul_omega_pow(s);
    for &u in &ns {
        d.add_to_phase(u, Phase::new(-2 * s));
    }
    for i in 0..ns.len() {
        for j in i + 1..ns.len() {
            d.toggle_phase_edge(ns[i], ns[j]);
        }
    }
    Ok(())
}

fn check_pivot(d: &Diagram, u: V, v: V) -> Result<(), RewriteError> {
    let ok = u != v
        && internal_z(d, u)
        && internal_z(d, v)
        && d.phase(u).is_pauli()
        && d.phase(v).is_pauli()
        && d.edge_kind(u, v) == Some(EdgeKind::Hadamard);
    if ok {
        Ok(())
    } else {
        Err(no_match(Rule::Pivot, &[u, v], "needs adjacent internal spiders with phases in {0, π}"))
    }
}

fn pivot_unchecked(d: &mut Diagram, u: V, v: V) {
    let j = d.phase(u) == Phase::PI;
    let k = d.phase(v) == Phase::PI;
    let nu: Vec<V> = d.neighbors(u).filter(|&x| x != v).collect();
    let nv: Vec<V> = d.neighbors(v).filter(|&x| x != u).collect();
    let w: Vec<V> = nu.iter().copied().filter(|x| nv.contains(x)).collect();
    let uu: Vec<V> = nu.iter().copied().filter(|x| !w.contains(x)).collect();
    let vv: Vec<V> = nv.iter().copied().filter(|x| !w.contains(x)).collect();
    d.remove_vertex(u);
    d.remove_vertex(v);

    let removed_edges = 1 + uu.len() + vv.len() + 2 * w.len();
    let sc = d.scalar_mut();
    sc.mul_sqrt2_pow(2 - removed_edges as i32);
    if j && k {
        *sc = -*sc;
    }
    let pi = |b: bool| if b { Phase::PI } else { Phase::ZERO };
    for &x in &uu {
        d.add_to_phase(x, pi(k));
    }
    for &x in &vv {
        d.add_to_phase(x, pi(j));
    }
    for &x in &w {
        d.add_to_phase(x, pi(!(j ^ k)));
    }
    for &a in &uu {
        for &b in &vv {
            d.toggle_phase_edge(a, b);
        }
        for &b in &w {
            d.toggle_phase_edge(a, b);
        }
    }
    for &a in &vv {
        for &b in &w {
            d.toggle_phase_edge(a, b);
        }
    }
}

/// Pivots on an edge between two internal spiders with phases in {0, π}.
pub fn pivot(d: &mut Diagram, u: V, v: V) -> Result<(), RewriteError> {
    check_pivot(d, u, v)?;
    pivot_unchecked(d, u, v);
    Ok(())
}

/// Pivots an internal Pauli spider `u` with an internal non-Clifford
/// neighbour `v` after moving `v`'s phase onto a new phase gadget.
/// Returns the new (hub, leaf).
pub fn pivot_gadget(d: &mut Diagram, u: V, v: V) -> Result<(V, V), RewriteError> {
    let ok = u != v
        && internal_z(d, u)
        && internal_z(d, v)
        && d.phase(u).is_pauli()
        && !d.phase(v).is_clifford()
        && d.connected(u, v)
        && !in_gadget(d, u)
        && !in_gadget(d, v);
    if !ok {
        return Err(no_match(Rule::PivotGadget, &[u, v], "needs a Pauli spider next to a non-Clifford spider, neither in a gadget"));
    }
    let p = d.phase(v);
    d.set_phase(v, Phase::ZERO);
    let h = d.add_z(Phase::ZERO);
    let l = d.add_z(p);
    d.add_edge(v, h, EdgeKind::Hadamard);
    d.add_edge(h, l, EdgeKind::Hadamard);
    pivot_unchecked(d, u, v);
    Ok((h, l))
}

/// Removes an internal arity-1 spider with phase 0 or π, copying it
/// through its neighbour.
pub fn copy_leaf(d: &mut Diagram, v: V) -> Result<(), RewriteError> {
    let p = match z_phase(d, v) {
        Some(p) if p.is_pauli() => p,
        _ => return Err(no_match(Rule::CopyLeaf, &[v], "needs a spider with phase 0 or π")),
    };
    if d.degree(v) != 1 || !internal_z(d, v) || d.edge_kind(v, d.incident(v)[0].0) != Some(EdgeKind::Hadamard) {
        return Err(no_match(Rule::CopyLeaf, &[v], "needs an internal arity-1 spider"));
    }
    let w = d.incident(v)[0].0;
    let flip = p == Phase::PI;
    let pw = d.phase(w);
    let others: Vec<(V, EdgeKind)> = d.incident(w).iter().copied().filter(|&(x, _)| x != v).collect();
    d.remove_vertex(v);
    d.remove_vertex(w);
    // the pair v–w evaluates to √2·[x_w = p]
    d.scalar_mut().mul_sqrt2_pow(1);
    if flip {
        d.scalar_mut().mul_omega_pow(pw.eighths() as i64);
    }
    for (x, e) in others {
        d.scalar_mut().mul_sqrt2_pow(-1);
        if d.is_z(x) {
            if flip {
                d.add_to_phase(x, Phase::PI);
            }
        } else {
            // a boundary now sees a fixed basis state
            let c = d.add_z(p);
            d.add_edge(c, x, e.toggled());
        }
    }
    Ok(())
}

/// Removes an internal arity-2 spider with phase π by substituting one of
/// its neighbours with the negation of the other.
pub fn remove_pi_pair(d: &mut Diagram, v: V) -> Result<(), RewriteError> {
    if z_phase(d, v) != Some(Phase::PI) || d.degree(v) != 2 || !internal_z(d, v) {
        return Err(no_match(Rule::PiPair, &[v], "needs an internal arity-2 spider with phase π"));
    }
    let (x, y) = (d.incident(v)[0].0, d.incident(v)[1].0);
    let touches_boundary = |d: &Diagram, s: V| d.neighbors(s).any(|n| d.is_boundary(n));
    let (a, b) = if touches_boundary(d, x) && !touches_boundary(d, y) { (y, x) } else { (x, y) };
    d.remove_vertex(v);
    let pa = d.phase(a);
    d.scalar_mut().mul_omega_pow(pa.eighths() as i64);
    d.add_to_phase(b, -pa);
    let edges: Vec<(V, EdgeKind)> = d.incident(a).to_vec();
    d.remove_vertex(a);
    for (u, e) in edges {
        if d.is_z(u) {
            d.add_to_phase(u, Phase::PI);
            d.add_edge_smart(u, b, EdgeKind::Hadamard);
        } else {
            // boundary wire: insert a NOT in front of b
            let c = d.add_z(Phase::PI);
            d.add_edge(u, c, e.toggled());
            d.add_edge(c, b, EdgeKind::Hadamard);
        }
    }
    Ok(())
}

/// Evaluates an isolated spider into the scalar.
pub fn remove_scalar_spider(d: &mut Diagram, v: V) -> Result<(), RewriteError> {
    let p = match z_phase(d, v) {
        Some(p) if d.degree(v) == 0 => p,
        _ => return Err(no_match(Rule::ScalarSpider, &[v], "needs an isolated Z-spider")),
    };
    d.remove_vertex(v);
    *d.scalar_mut() *= ExactScalar::one() + ExactScalar::omega_pow(p.eighths() as i64);
    Ok(())
}

/// Phase-0 hub with exactly one leaf; returns (leaf, support).
fn gadget_parts(d: &Diagram, h: V) -> Option<(V, Vec<V>)> {
    if z_phase(d, h) != Some(Phase::ZERO) || !internal_z(d, h) {
        return None;
    }
    let leaves: Vec<V> = d.neighbors(h).filter(|&w| d.degree(w) == 1).collect();
    if leaves.len() != 1 {
        return None;
    }
    let mut support: Vec<V> = d.neighbors(h).filter(|&w| w != leaves[0]).collect();
    support.sort_unstable();
    Some((leaves[0], support))
}

/// Merges the gadget hubbed at `h2` into the gadget hubbed at `h1` (same support).
pub fn fuse_gadgets(d: &mut Diagram, h1: V, h2: V) -> Result<(), RewriteError> {
    let (g1, g2) = (gadget_parts(d, h1), gadget_parts(d, h2));
    let ((l1, s1), (l2, s2)) = match (g1, g2) {
        (Some(a), Some(b)) if h1 != h2 && a.1 == b.1 && !a.1.is_empty() => (a, b),
        _ => return Err(no_match(Rule::GadgetFusion, &[h1, h2], "needs two phase gadgets with equal support")),
    };
    debug_assert_eq!(s1, s2);
    let p2 = d.phase(l2);
    d.add_to_phase(l1, p2);
    d.remove_vertex(l2);
    d.remove_vertex(h2);
    d.scalar_mut().mul_sqrt2_pow(1 - s1.len() as i32);
    Ok(())
}

/// Applies `rule` at `vertices`; the dispatcher used by replay.
pub fn apply_rule(d: &mut Diagram, rule: Rule, vertices: &[V]) -> Result<(), RewriteError> {
    let arg = |i: usize| vertices.get(i).copied().ok_or_else(|| no_match(rule, vertices, "missing vertex argument"));
    match rule {
        Rule::Fuse => fuse_spiders(d, arg(0)?, arg(1)?),
        Rule::Identity => remove_identity(d, arg(0)?),
        Rule::LocalComplement => local_complement(d, arg(0)?),
        Rule::Pivot => pivot(d, arg(0)?, arg(1)?),
        Rule::PivotGadget => pivot_gadget(d, arg(0)?, arg(1)?).map(|_| ()),
        Rule::CopyLeaf => copy_leaf(d, arg(0)?),
        Rule::PiPair => remove_pi_pair(d, arg(0)?),
        Rule::ScalarSpider => remove_scalar_spider(d, arg(0)?),
        Rule::GadgetFusion => fuse_gadgets(d, arg(0)?, arg(1)?),
    }
}

/// Replays a rewrite log on a copy of `initial`.
pub fn replay(initial: &Diagram, steps: &[RewriteStep]) -> Result<Diagram, RewriteError> {
    let mut d = initial.clone();
    for s in steps {
        apply_rule(&mut d, s.rule, &s.vertices)?;
    }
    Ok(d)
}

// ----------------------------------------------------------------------
// driver

struct Engine<'a> {
    d: &'a mut Diagram,
    log: Option<&'a mut Vec<RewriteStep>>,
}

impl Engine<'_> {
    fn apply(&mut self, rule: Rule, vs: &[V]) -> bool {
        match &mut self.log {
            None => apply_rule(self.d, rule, vs).is_ok(),
            Some(log) => {
                let saved = self.d.scalar();
                self.d.set_scalar(ExactScalar::one());
                let ok = apply_rule(self.d, rule, vs).is_ok();
                let delta = self.d.scalar();
                self.d.set_scalar(saved * delta);
                if ok {
                    log.push(RewriteStep { rule, vertices: vs.to_vec(), scalar_delta: delta });
                }
                ok
            }
        }
    }

    fn cheap_pass(&mut self) -> bool {
        let mut changed = false;
        for v in 0..self.d.id_bound() {
            if !self.d.contains(v) || !self.d.is_z(v) {
                continue;
            }
            let p = self.d.phase(v);
            let deg = self.d.degree(v);
            let rule = match (deg, p.eighths()) {
                (0, _) => Rule::ScalarSpider,
                (1, 0) | (1, 4) => Rule::CopyLeaf,
                (2, 0) => Rule::Identity,
                (2, 4) => Rule::PiPair,
                _ => continue,
            };
            changed |= self.apply(rule, &[v]);
        }
        changed
    }

    fn lc_pass(&mut self) -> bool {
        let mut changed = false;
        for v in 0..self.d.id_bound() {
            if self.d.contains(v) && matches!(z_phase(self.d, v).map(|p| p.eighths()), Some(2) | Some(6)) {
                changed |= self.apply(Rule::LocalComplement, &[v]);
            }
        }
        changed
    }

    fn pivot_pass(&mut self, rule: Rule) -> bool {
        let mut changed = false;
        for u in 0..self.d.id_bound() {
            if !self.d.contains(u) || !self.d.is_z(u) || !self.d.phase(u).is_pauli() || !internal_z(self.d, u) {
                continue;
            }
            let partner = self.d.neighbors(u).find(|&v| match rule {
                Rule::Pivot => self.d.phase(v).is_pauli() && check_pivot(self.d, u, v).is_ok(),
                _ => !self.d.phase(v).is_clifford() && internal_z(self.d, v) && !in_gadget(self.d, v),
            });
            if let Some(v) = partner {
                if rule == Rule::PivotGadget && in_gadget(self.d, u) {
                    continue;
                }
                changed |= self.apply(rule, &[u, v]);
            }
        }
        changed
    }

    fn gadget_fusion_pass(&mut self) -> bool {
        let mut seen: std::collections::HashMap<Vec<V>, V> = std::collections::HashMap::new();
        let mut changed = false;
        for h in 0..self.d.id_bound() {
            if !self.d.contains(h) {
                continue;
            }
            if let Some((_, support)) = gadget_parts(self.d, h) {
                if support.is_empty() {
                    continue;
                }
                match seen.get(&support) {
                    Some(&h1) if self.d.contains(h1) => changed |= self.apply(Rule::GadgetFusion, &[h1, h]),
                    _ => {
                        seen.insert(support, h);
                    }
                }
            }
        }
        changed
    }

    fn run(&mut self, opts: &SimplifyOptions) {
        let t0 = self.d.tcount();
        let mut m = measure(self.d);
        loop {
            let changed = self.cheap_pass()
                || self.lc_pass()
                || self.pivot_pass(Rule::Pivot)
                || (opts.pivot_gadget && self.pivot_pass(Rule::PivotGadget))
                || (opts.gadget_fusion && self.gadget_fusion_pass());
            if !changed {
                break;
            }
            let m2 = measure(self.d);
            assert!(m2 < m, "rewrite measure did not decrease: {m:?} -> {m2:?}");
            m = m2;
        }
        assert!(self.d.tcount() <= t0, "simplification increased the T-count");
    }
}

/// Rewrites a graph-like diagram to the reduced form with default options.
pub fn full_simplify(d: &mut Diagram) {
    full_simplify_with(d, &SimplifyOptions::default(), None);
}

/// As [`full_simplify`], optionally recording every applied rewrite.
pub fn full_simplify_with(d: &mut Diagram, opts: &SimplifyOptions, log: Option<&mut Vec<RewriteStep>>) {
    Engine { d, log }.run(opts);
}

/// Clifford/Pauli structure that the reduced form forbids among internal
/// spiders; empty for a reduced diagram.
pub fn lemma_violations(d: &Diagram) -> Vec<String> {
    let mut out = Vec::new();
    for v in d.vertices() {
        if !internal_z(d, v) {
            continue;
        }
        let p = d.phase(v);
        if p.is_clifford() {
            for w in d.neighbors(v) {
                if v < w && internal_z(d, w) && d.phase(w).is_clifford() {
                    out.push(format!("adjacent Clifford spiders {v} and {w}"));
                }
            }
            if d.degree(v) <= 2 {
                out.push(format!("Clifford spider {v} has arity {}", d.degree(v)));
            }
        }
        if p.eighths() == 2 || p.eighths() == 6 {
            out.push(format!("spider {v} has phase {p:?}"));
        }
    }
    out
}
