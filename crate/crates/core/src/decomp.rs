//! Decompositions of T-like spiders into weighted sums of diagrams with
//! fewer non-Clifford spiders.
//!
//! A decomposition maps a diagram `d` to terms `(w_k, d_k)` with
//! `Σ_k w_k·⟦d_k⟧ = ⟦d⟧`. The term diagrams keep `d`'s global scalar (plus
//! whatever the structural edits contribute); the weights are kept apart so
//! callers can inspect them.
//!
//! Leg phases are never required to be exactly π/4: each recipe subtracts
//! π/4 from a leg spider in place, which is the same as unfusing a π/4 magic
//! leg (see [`unfuse_t`]) and consuming it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Diagram, EdgeKind, Phase, V};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    /// Cat decompositions in the order 4, 6, 5, 3, then the partial 5-T
    /// decomposition, then 2-T / single-T.
    CatsThenPartial,
    /// Six T-spiders into seven terms, then 2-T / single-T.
    Bss,
    /// One T-spider at a time.
    Naive,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::CatsThenPartial, StrategyKind::Bss, StrategyKind::Naive];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::CatsThenPartial => "cats",
            StrategyKind::Bss => "bss",
            StrategyKind::Naive => "naive",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = DecompError;
    fn from_str(s: &str) -> Result<Self, DecompError> {
        match s {
            "cats" => Ok(StrategyKind::CatsThenPartial),
            "bss" => Ok(StrategyKind::Bss),
            "naive" => Ok(StrategyKind::Naive),
            other => Err(DecompError::UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("unknown strategy `{0}` (expected cats, bss or naive)")]
    UnknownStrategy(String),
    #[error("cat arity {0} is outside 3..=6")]
    BadArity(usize),
    #[error("cat center {0} has phase {1:?}, expected {2}")]
    BadCenter(V, Phase, &'static str),
    #[error("no cat leg without boundary neighbours to push π through")]
    NoFreeLeg,
    #[error("vertex {0} is not a T-like spider")]
    NotTLike(V),
    #[error("need {needed} T-like spiders, found {found}")]
    TooFewT { needed: usize, found: usize },
    #[error("zero T-count")]
    ZeroTCount,
    #[error("zero leaf terms")]
    ZeroLeaves,
}

/// An internal Pauli spider all of whose neighbours are T-like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatCandidate {
    pub center: V,
    pub legs: Vec<V>,
}

impl CatCandidate {
    pub fn arity(&self) -> usize {
        self.legs.len()
    }
}

#[derive(Clone, Debug)]
pub struct DecompTerm {
    pub weight: ExactScalar,
    pub diagram: Diagram,
}

impl DecompTerm {
    /// The term diagram with its weight folded into the global scalar.
    pub fn into_weighted(self) -> Diagram {
        let mut d = self.diagram;
        *d.scalar_mut() *= self.weight;
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Cat(CatCandidate),
    Partial5(Vec<V>),
    Fallback,
}

/// What a decomposition step did, for statistics and traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompKind {
    Cat(usize),
    Partial5,
    Bss6,
    Pair,
    Single,
}

impl DecompKind {
    pub fn branches(self) -> usize {
        match self {
            DecompKind::Cat(3) | DecompKind::Cat(4) | DecompKind::Pair | DecompKind::Single => 2,
            DecompKind::Cat(_) | DecompKind::Partial5 => 3,
            DecompKind::Bss6 => 7,
        }
    }

    /// T-spiders removed from every branch.
    pub fn t_removed(self) -> usize {
        match self {
            DecompKind::Cat(n) => n,
            DecompKind::Partial5 => 4,
            DecompKind::Bss6 => 6,
            DecompKind::Pair => 2,
            DecompKind::Single => 1,
        }
    }
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompKind::Cat(n) => write!(f, "cat{n}"),
            DecompKind::Partial5 => f.write_str("partial5"),
            DecompKind::Bss6 => f.write_str("bss6"),
            DecompKind::Pair => f.write_str("pair"),
            DecompKind::Single => f.write_str("single"),
        }
    }
}

// ----------------------------------------------------------------------
// matching

fn is_t(d: &Diagram, v: V) -> bool {
    d.is_z(v) && d.phase(v).is_t_like()
}

/// Every cat structure with 3 to 6 legs, in increasing center order.
pub fn find_cat_candidates(d: &Diagram) -> Vec<CatCandidate> {
    let mut out = Vec::new();
    for c in d.vertices() {
        if !d.is_z(c) || !d.phase(c).is_pauli() {
            continue;
        }
        let n = d.degree(c);
        if !(3..=6).contains(&n) {
            continue;
        }
        if d.incident(c).iter().all(|&(w, e)| w != c && e == EdgeKind::Hadamard && is_t(d, w)) {
            out.push(CatCandidate { center: c, legs: d.neighbor_vec(c) });
        }
    }
    out
}

const CAT_PRIORITY: [usize; 4] = [4, 6, 5, 3];

/// Five T-spiders chosen greedily by shared neighbourhood, seeded with the
/// lowest-id T-spider.
pub fn choose_partial5_legs(d: &Diagram) -> Option<Vec<V>> {
    let ts: Vec<V> = d.t_spiders().collect();
    if ts.len() < 5 {
        return None;
    }
    let mut chosen = vec![ts[0]];
    let mut hood: std::collections::HashSet<V> = d.neighbors(ts[0]).collect();
    while chosen.len() < 5 {
        let best = ts
            .iter()
            .copied()
            .filter(|v| !chosen.contains(v))
            .max_by_key(|&v| (d.neighbors(v).filter(|w| hood.contains(w)).count(), std::cmp::Reverse(v)))
            .unwrap();
        hood.extend(d.neighbors(best));
        chosen.push(best);
    }
    Some(chosen)
}

/// The highest-priority decomposition available under the cat strategy.
pub fn find_best_candidate(d: &Diagram) -> Selection {
    let cands = find_cat_candidates(d);
    for n in CAT_PRIORITY {
        if let Some(c) = cands.iter().find(|c| c.arity() == n) {
            return Selection::Cat(c.clone());
        }
    }
    match choose_partial5_legs(d) {
        Some(legs) => Selection::Partial5(legs),
        None => Selection::Fallback,
    }
}

// ----------------------------------------------------------------------
// preparatory rewrites

/// Moves a π on the cat center through one leg (a change of variables on
/// that leg), leaving the center at phase 0.
pub fn normalize_cat_pi(d: &mut Diagram, c: &CatCandidate) -> Result<(), DecompError> {
    if d.phase(c.center) != Phase::PI {
        return Err(DecompError::BadCenter(c.center, d.phase(c.center), "π"));
    }
    let leg = *c
        .legs
        .iter()
        .find(|&&l| d.neighbors(l).all(|w| !d.is_boundary(w)))
        .ok_or(DecompError::NoFreeLeg)?;
    let p = d.phase(leg);
    for w in d.neighbor_vec(leg) {
        d.add_to_phase(w, Phase::PI);
    }
    d.scalar_mut().mul_omega_pow(p.eighths() as i64);
    d.set_phase(leg, -p);
    Ok(())
}

/// Splits a π/4 magic state off a T-like spider as a phase gadget
/// `v –H– hub(0) –H– leaf(π/4)`. Returns `(hub, leaf)`.
pub fn unfuse_t(d: &mut Diagram, v: V) -> Result<(V, V), DecompError> {
    if !is_t(d, v) {
        return Err(DecompError::NotTLike(v));
    }
    d.add_to_phase(v, Phase::new(-1));
    let hub = d.add_z(Phase::ZERO);
    let leaf = d.add_z(Phase::T);
    d.add_edge(v, hub, EdgeKind::Hadamard);
    d.add_edge(hub, leaf, EdgeKind::Hadamard);
    Ok((hub, leaf))
}

// ----------------------------------------------------------------------
// term recipes

/// `2^p · (a + bω + cω² + dω³)`, the form the recipe constants are written in.
fn pow2(p: i32, c: [i128; 4]) -> ExactScalar {
    ExactScalar::new(c, 2 * p)
}

fn shift(d: &mut Diagram, vs: &[V], k: i64) {
    for &v in vs {
        d.add_to_phase(v, Phase::new(k));
    }
}

/// All legs −π/4, every leg fused into the center, center −π/2.
fn cat_fused(d: &Diagram, center: V, legs: &[V]) -> Diagram {
    let mut g = d.clone();
    g.set_phase(center, Phase::new(-2));
    // detach every leg first: fusing one leg can create a parallel edge to
    // another leg that would otherwise cancel against its center edge
    for &l in legs {
        g.add_to_phase(l, Phase::new(-1));
        g.remove_edge(l, center);
    }
    for &l in legs {
        g.fuse_into(center, l);
    }
    g
}

fn legs_only(d: &Diagram, legs: &[V]) -> Diagram {
    let mut g = d.clone();
    shift(&mut g, legs, -1);
    g
}

fn cat4_terms(d: &Diagram, center: V, legs: &[V]) -> Vec<DecompTerm> {
    vec![
        DecompTerm { weight: pow2(0, [0, 0, 1, 0]), diagram: legs_only(d, legs) },
        DecompTerm { weight: pow2(-1, [1, 0, -1, 0]), diagram: cat_fused(d, center, legs) },
    ]
}

fn cat6_terms(d: &Diagram, center: V, legs: &[V]) -> Vec<DecompTerm> {
    let mut g2 = legs_only(d, legs);
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            g2.add_edge_smart(legs[i], legs[j], EdgeKind::Hadamard);
        }
    }
    vec![
        DecompTerm { weight: pow2(-1, [1, 0, 0, 0]), diagram: cat_fused(d, center, legs) },
        DecompTerm { weight: pow2(-1, [-1, 0, 1, 0]), diagram: legs_only(d, legs) },
        DecompTerm { weight: pow2(7, [0, -1, 0, 0]), diagram: g2 },
    ]
}

/// Decomposes a cat structure into 2 (arity 3, 4) or 3 (arity 5, 6) terms.
/// A center with phase π is normalised first.
pub fn apply_cat_decomp(d: &Diagram, c: &CatCandidate) -> Result<Vec<DecompTerm>, DecompError> {
    let n = c.arity();
    if !(3..=6).contains(&n) {
        return Err(DecompError::BadArity(n));
    }
    if let Some(&l) = c.legs.iter().find(|&&l| !is_t(d, l)) {
        return Err(DecompError::NotTLike(l));
    }
    let mut g = d.clone();
    match g.phase(c.center).eighths() {
        0 => {}
        4 => normalize_cat_pi(&mut g, c)?,
        _ => return Err(DecompError::BadCenter(c.center, g.phase(c.center), "0 or π")),
    }
    let mut legs = c.legs.clone();
    if n == 3 || n == 5 {
        // an extra leg whose value is pinned to 0 by a phase-0 leaf
        let v = g.add_z(Phase::T);
        let w = g.add_z(Phase::ZERO);
        g.add_edge(v, w, EdgeKind::Hadamard);
        g.add_edge(v, c.center, EdgeKind::Hadamard);
        legs.push(v);
    }
    Ok(if legs.len() == 4 { cat4_terms(&g, c.center, &legs) } else { cat6_terms(&g, c.center, &legs) })
}

fn check_t(d: &Diagram, legs: &[V], needed: usize) -> Result<(), DecompError> {
    if legs.len() < needed {
        return Err(DecompError::TooFewT { needed, found: legs.len() });
    }
    match legs.iter().find(|&&v| !is_t(d, v)) {
        Some(&v) => Err(DecompError::NotTLike(v)),
        None => Ok(()),
    }
}

/// Five T-spiders into three terms, each keeping a single T-spider.
pub fn apply_t5_partial(d: &Diagram, legs: &[V]) -> Result<Vec<DecompTerm>, DecompError> {
    check_t(d, legs, 5)?;
    let vs = &legs[..5];

    let mut g0 = d.clone();
    shift(&mut g0, vs, -1);
    g0.add_to_phase(vs[0], Phase::new(-3));
    for &v in &vs[1..] {
        g0.add_edge_smart(vs[0], v, EdgeKind::Plain);
    }

    let mut g1 = d.clone();
    let p = g1.add_z(Phase::ZERO);
    for &v in vs {
        g1.add_to_phase(v, Phase::new(-1));
        g1.add_edge(v, p, EdgeKind::Hadamard);
    }
    let w = g1.add_z(Phase::new(-1));
    g1.add_edge(w, p, EdgeKind::Hadamard);

    let mut g2 = d.clone();
    let p = g2.add_z(Phase::ZERO);
    let w = g2.add_z(Phase::new(-1));
    g2.add_edge(p, w, EdgeKind::Hadamard);
    for i in 0..5 {
        g2.add_to_phase(vs[i], Phase::new(-1));
        g2.add_edge(vs[i], p, EdgeKind::Hadamard);
        g2.add_edge(vs[i], w, EdgeKind::Hadamard);
    }
    for i in 0..5 {
        for j in i + 1..5 {
            g2.add_edge_smart(vs[i], vs[j], EdgeKind::Hadamard);
        }
    }

    Ok(vec![
        DecompTerm { weight: pow2(1, [1, 0, 0, 0]), diagram: g0 },
        DecompTerm { weight: pow2(1, [-1, 0, 1, 0]), diagram: g1 },
        DecompTerm { weight: pow2(9, [0, -1, 0, 0]), diagram: g2 },
    ])
}

fn bss_phi(d: &Diagram, vs: [V; 6]) -> Diagram {
    let mut g = d.clone();
    let mut ws = Vec::with_capacity(5);
    for &v in &vs[..5] {
        let w = g.add_z(Phase::ZERO);
        g.add_edge(v, w, EdgeKind::Hadamard);
        g.add_edge(w, vs[5], EdgeKind::Hadamard);
        g.add_to_phase(v, Phase::new(-1));
        ws.push(w);
    }
    g.add_to_phase(vs[5], Phase::new(3));
    for (a, b) in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)] {
        g.add_edge(ws[a], ws[b], EdgeKind::Hadamard);
    }
    g
}

fn star(d: &Diagram, vs: &[V], hub: Phase, edge: EdgeKind, leg_shift: i64) -> Diagram {
    let mut g = d.clone();
    let w = g.add_z(hub);
    for &v in vs {
        g.add_to_phase(v, Phase::new(leg_shift));
        g.add_edge_smart(w, v, edge);
    }
    g
}

/// Six T-spiders into seven terms.
pub fn apply_bss(d: &Diagram, legs: &[V]) -> Result<Vec<DecompTerm>, DecompError> {
    check_t(d, legs, 6)?;
    let vs = [legs[0], legs[1], legs[2], legs[3], legs[4], legs[5]];
    let mut b66 = d.clone();
    shift(&mut b66, &vs, 3);
    Ok(vec![
        DecompTerm { weight: pow2(-2, [-1, 0, 1, 1]), diagram: legs_only(d, &vs) },
        DecompTerm { weight: pow2(-2, [-1, 0, 1, -1]), diagram: b66 },
        DecompTerm { weight: pow2(1, [0, -1, 0, 0]), diagram: star(d, &vs, Phase::PI, EdgeKind::Hadamard, 1) },
        DecompTerm { weight: pow2(1, [-1, 0, -1, 0]), diagram: star(d, &vs, Phase::ZERO, EdgeKind::Hadamard, 1) },
        DecompTerm { weight: pow2(1, [1, 0, 0, 0]), diagram: star(d, &vs, Phase::new(-2), EdgeKind::Plain, -1) },
        DecompTerm { weight: pow2(3, [1, 0, 1, 0]), diagram: bss_phi(d, vs) },
        DecompTerm {
            weight: pow2(3, [1, 0, 1, 0]),
            diagram: bss_phi(d, [vs[0], vs[1], vs[3], vs[4], vs[5], vs[2]]),
        },
    ])
}

/// Two T-spiders into two terms.
pub fn apply_pair(d: &Diagram, legs: &[V]) -> Result<Vec<DecompTerm>, DecompError> {
    check_t(d, legs, 2)?;
    let (a, b) = (legs[0], legs[1]);
    let mut bell = d.clone();
    bell.add_to_phase(a, Phase::new(-1));
    bell.add_to_phase(b, Phase::new(1));
    bell.add_edge_smart(a, b, EdgeKind::Plain);
    Ok(vec![
        DecompTerm { weight: ExactScalar::one(), diagram: bell },
        DecompTerm { weight: ExactScalar::omega_pow(1), diagram: star(d, &[a, b], Phase::PI, EdgeKind::Hadamard, -1) },
    ])
}

/// One T-spider into its |0⟩ and |1⟩ parts.
pub fn apply_single(d: &Diagram, v: V) -> Result<Vec<DecompTerm>, DecompError> {
    check_t(d, &[v], 1)?;
    Ok(vec![
        DecompTerm { weight: ExactScalar::sqrt2_pow(-1), diagram: star(d, &[v], Phase::ZERO, EdgeKind::Hadamard, -1) },
        DecompTerm {
            weight: ExactScalar::omega_pow(1) * ExactScalar::sqrt2_pow(-1),
            diagram: star(d, &[v], Phase::PI, EdgeKind::Hadamard, -1),
        },
    ])
}

/// The strategy's decomposition for diagrams without a better option
/// (no cat and fewer than five T-spiders for the cat strategy).
pub fn apply_fallback(d: &Diagram, strategy: StrategyKind) -> Result<(DecompKind, Vec<DecompTerm>), DecompError> {
    let ts: Vec<V> = d.t_spiders().collect();
    if ts.is_empty() {
        return Err(DecompError::ZeroTCount);
    }
    let t = ts.len();
    match strategy {
        StrategyKind::Bss if t >= 6 => Ok((DecompKind::Bss6, apply_bss(d, &ts[..6])?)),
        StrategyKind::Bss | StrategyKind::CatsThenPartial if t >= 2 => Ok((DecompKind::Pair, apply_pair(d, &ts[..2])?)),
        _ => Ok((DecompKind::Single, apply_single(d, ts[0])?)),
    }
}

/// One decomposition step under `strategy`; `None` when the T-count is zero.
pub fn decompose(d: &Diagram, strategy: StrategyKind) -> Option<(DecompKind, Vec<DecompTerm>)> {
    if d.tcount() == 0 {
        return None;
    }
    let step = match strategy {
        StrategyKind::CatsThenPartial => match find_best_candidate(d) {
            Selection::Cat(c) => apply_cat_decomp(d, &c).map(|ts| (DecompKind::Cat(c.arity()), ts)),
            Selection::Partial5(legs) => apply_t5_partial(d, &legs).map(|ts| (DecompKind::Partial5, ts)),
            Selection::Fallback => apply_fallback(d, strategy),
        },
        _ => apply_fallback(d, strategy),
    };
    Some(step.expect("selected decomposition must apply"))
}

/// `log₂(leaf_terms) / initial_t`.
pub fn effective_alpha(initial_t: usize, leaf_terms: u64) -> Result<f64, DecompError> {
    if initial_t == 0 {
        return Err(DecompError::ZeroTCount);
    }
    if leaf_terms == 0 {
        return Err(DecompError::ZeroLeaves);
    }
    Ok((leaf_terms as f64).log2() / initial_t as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexKind;
    use crate::random::embed_in_random_host;
    use crate::tensor::{to_tensor, Tensor};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn weighted_sum(terms: &[DecompTerm]) -> Tensor {
        let mut acc: Option<Tensor> = None;
        for t in terms {
            let mut x = to_tensor(&t.diagram).unwrap();
            x.scale(t.weight.to_complex());
            match acc.as_mut() {
                None => acc = Some(x),
                Some(a) => a.add(&x),
            }
        }
        acc.unwrap()
    }

    fn assert_sound(d: &Diagram, terms: &[DecompTerm]) {
        let (lhs, rhs) = (to_tensor(d).unwrap(), weighted_sum(terms));
        assert!(lhs.approx_eq(&rhs, 1e-10), "max diff {}", lhs.max_abs_diff(&rhs));
        for t in terms {
            assert!(!t.weight.is_zero());
            assert!(t.diagram.is_graph_like(), "{}", t.diagram.to_text());
            assert_eq!(t.diagram.tcount(), t.diagram.recount_t());
        }
    }

    /// `n` T-like spiders with one output each; phases from `phases`.
    fn t_states(phases: &[i64]) -> (Diagram, Vec<V>) {
        let mut d = Diagram::new();
        let mut vs = Vec::new();
        let mut outs = Vec::new();
        for &p in phases {
            let v = d.add_z(Phase::new(p));
            let b = d.add_vertex(VertexKind::Boundary);
            d.add_edge(v, b, EdgeKind::Plain);
            vs.push(v);
            outs.push(b);
        }
        d.set_outputs(outs);
        (d, vs)
    }

    /// A cat with `n` π/4 legs; all but the last carry an output wire.
    fn cat(n: usize, center: Phase) -> (Diagram, CatCandidate) {
        let (mut d, mut legs) = t_states(&vec![1; n - 1]);
        legs.push(d.add_z(Phase::T));
        let c = d.add_z(center);
        for &l in &legs {
            d.add_edge(c, l, EdgeKind::Hadamard);
        }
        (d, CatCandidate { center: c, legs })
    }

    #[test]
    fn cat_term_counts_and_soundness() {
        for (n, count) in [(3, 2), (4, 2), (5, 3), (6, 3)] {
            for center in [Phase::ZERO, Phase::PI] {
                let (d, c) = cat(n, center);
                let terms = apply_cat_decomp(&d, &c).unwrap();
                assert_eq!(terms.len(), count);
                assert_sound(&d, &terms);
                for t in &terms {
                    assert_eq!(t.diagram.tcount(), d.tcount() - n);
                }
            }
        }
    }

    #[test]
    fn cat_with_mixed_leg_phases() {
        let (mut d, legs) = t_states(&[3, 5, 7, 1, 3]);
        let c = d.add_z(Phase::ZERO);
        for &l in &legs {
            d.add_edge(c, l, EdgeKind::Hadamard);
        }
        d.add_edge(legs[0], legs[1], EdgeKind::Hadamard);
        let cand = CatCandidate { center: c, legs };
        assert_sound(&d, &apply_cat_decomp(&d, &cand).unwrap());
    }

    #[test]
    fn cat_arity_is_checked() {
        let (d, mut c) = cat(4, Phase::ZERO);
        c.legs.truncate(2);
        assert_eq!(apply_cat_decomp(&d, &c).unwrap_err(), DecompError::BadArity(2));
    }

    #[test]
    fn pi_center_normalisation() {
        for n in [3, 4] {
            let (mut d, c) = cat(n, Phase::PI);
            let free = *c.legs.last().unwrap();
            let before = to_tensor(&d).unwrap();
            normalize_cat_pi(&mut d, &c).unwrap();
            assert_eq!(d.phase(c.center), Phase::ZERO);
            assert_eq!(d.phase(free), Phase::new(7));
            assert!(to_tensor(&d).unwrap().approx_eq(&before, 1e-10));
            assert_eq!(normalize_cat_pi(&mut d, &c), Err(DecompError::BadCenter(c.center, Phase::ZERO, "π")));
        }
        // every leg touches a boundary: nowhere to push the π
        let (mut d, legs) = t_states(&[1, 1, 1]);
        let center = d.add_z(Phase::PI);
        for &l in &legs {
            d.add_edge(center, l, EdgeKind::Hadamard);
        }
        assert_eq!(normalize_cat_pi(&mut d, &CatCandidate { center, legs }), Err(DecompError::NoFreeLeg));
    }

    #[test]
    fn unfuse_t_is_exact() {
        for (p, rest) in [(1, 0), (3, 2), (5, 4), (7, 6)] {
            let (mut d, vs) = t_states(&[p]);
            let before = to_tensor(&d).unwrap();
            let (hub, leaf) = unfuse_t(&mut d, vs[0]).unwrap();
            assert_eq!(d.phase(vs[0]), Phase::new(rest));
            assert_eq!(d.phase(leaf), Phase::T);
            assert_eq!(d.degree(hub), 2);
            assert!(to_tensor(&d).unwrap().approx_eq(&before, 1e-12));
        }
        let (mut d, vs) = t_states(&[2]);
        assert_eq!(unfuse_t(&mut d, vs[0]), Err(DecompError::NotTLike(vs[0])));
    }

    #[test]
    fn single_t_terms_are_basis_states() {
        let (d, vs) = t_states(&[1]);
        let terms = apply_single(&d, vs[0]).unwrap();
        assert_sound(&d, &terms);
        // the unnormalised magic state |0⟩ + ω|1⟩ splits into its two components
        let t0 = to_tensor(&terms[0].clone().into_weighted()).unwrap();
        let t1 = to_tensor(&terms[1].clone().into_weighted()).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!(t0.approx_eq(&Tensor { n_in: 0, n_out: 1, data: vec![1.0.into(), 0.0.into()] }, 1e-12));
        assert!(t1.approx_eq(&Tensor { n_in: 0, n_out: 1, data: vec![0.0.into(), w] }, 1e-12));
    }

    #[test]
    fn pair_partial_and_bss_on_magic_states() {
        let (d, vs) = t_states(&[1, 1]);
        let terms = apply_pair(&d, &vs).unwrap();
        assert_eq!(terms.len(), 2);
        assert_sound(&d, &terms);

        let (d, vs) = t_states(&[1; 5]);
        let terms = apply_t5_partial(&d, &vs).unwrap();
        assert_eq!(terms.len(), 3);
        assert_sound(&d, &terms);
        for t in &terms {
            assert_eq!(t.diagram.tcount(), 1);
        }

        let (d, vs) = t_states(&[1; 6]);
        let terms = apply_bss(&d, &vs).unwrap();
        assert_eq!(terms.len(), 7);
        assert_sound(&d, &terms);
        assert!(terms.iter().all(|t| t.diagram.tcount() == 0));
    }

    #[test]
    fn selection_priority() {
        // a cat4 and a cat6 sharing nothing: cat4 wins
        let (mut d, legs) = t_states(&[1; 10]);
        let c6 = d.add_z(Phase::ZERO);
        let c4 = d.add_z(Phase::ZERO);
        for &l in &legs[..6] {
            d.add_edge(c6, l, EdgeKind::Hadamard);
        }
        for &l in &legs[6..] {
            d.add_edge(c4, l, EdgeKind::Hadamard);
        }
        match find_best_candidate(&d) {
            Selection::Cat(c) => assert_eq!((c.center, c.arity()), (c4, 4)),
            s => panic!("unexpected {s:?}"),
        }

        // no Clifford spiders, seven T-spiders
        let (d, _) = t_states(&[1; 7]);
        assert!(matches!(find_best_candidate(&d), Selection::Partial5(ref l) if l.len() == 5));

        let (d, _) = t_states(&[1, 3]);
        assert_eq!(find_best_candidate(&d), Selection::Fallback);
    }

    #[test]
    fn gadget_counts_its_leaf_as_a_leg() {
        let (mut d, vs) = t_states(&[1, 3, 5]);
        let hub = d.add_z(Phase::ZERO);
        let leaf = d.add_z(Phase::new(7));
        d.add_edge(hub, leaf, EdgeKind::Hadamard);
        for &v in &vs {
            d.add_edge(hub, v, EdgeKind::Hadamard);
        }
        let cands = find_cat_candidates(&d);
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].arity(), 4);
        assert!(cands[0].legs.contains(&leaf));
    }

    #[test]
    fn fallback_kinds() {
        let (d, _) = t_states(&[1; 6]);
        assert_eq!(apply_fallback(&d, StrategyKind::Bss).unwrap().0, DecompKind::Bss6);
        assert_eq!(apply_fallback(&d, StrategyKind::CatsThenPartial).unwrap().0, DecompKind::Pair);
        assert_eq!(apply_fallback(&d, StrategyKind::Naive).unwrap().0, DecompKind::Single);
        let (d, _) = t_states(&[2]);
        assert_eq!(apply_fallback(&d, StrategyKind::Naive).unwrap_err(), DecompError::ZeroTCount);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(effective_alpha(4, 2).unwrap(), 0.25);
        assert_eq!(effective_alpha(1, 2).unwrap(), 1.0);
        assert!((effective_alpha(4, 3).unwrap() - 0.396_240_625).abs() < 1e-9);
        assert_eq!(effective_alpha(0, 3), Err(DecompError::ZeroTCount));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in StrategyKind::ALL {
            assert_eq!(s.name().parse::<StrategyKind>().unwrap(), s);
        }
        assert!("fast".parse::<StrategyKind>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decompositions_are_sound_in_random_hosts(seed in any::<u64>(), extra in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut d, c) = cat(4, Phase::ZERO);
            d = embed_in_random_host(&mut rng, &d, &c.legs, extra, 0.5);
            let terms = apply_cat_decomp(&d, &c).unwrap();
            let (lhs, rhs) = (to_tensor(&d).unwrap(), weighted_sum(&terms));
            prop_assert!(lhs.approx_eq(&rhs, 1e-10));

            let (d, vs) = t_states(&[1, 3, 5, 7, 1]);
            let d = embed_in_random_host(&mut rng, &d, &vs, extra, 0.5);
            let terms = apply_t5_partial(&d, &vs).unwrap();
            prop_assert!(to_tensor(&d).unwrap().approx_eq(&weighted_sum(&terms), 1e-10));
        }
    }
}
