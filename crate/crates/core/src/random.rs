//! Random graph-like diagrams for tests and benchmarks.

use rand::Rng;

use crate::graph::{Diagram, EdgeKind, Phase, VertexKind};

/// `n` Z-spiders joined by Hadamard edges with probability `p`, plus
/// `outputs` boundary wires on random spiders (plain or Hadamard). Phases
/// are arbitrary multiples of π/4 when `allow_t`, otherwise multiples of π/2.
pub fn random_graph_like<R: Rng>(rng: &mut R, n: usize, outputs: usize, p: f64, allow_t: bool) -> Diagram {
    let mut d = Diagram::new();
    let vs: Vec<_> = (0..n)
        .map(|_| {
            let k = if allow_t { rng.gen_range(0..8) } else { 2 * rng.gen_range(0..4) };
            d.add_z(Phase::new(k))
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                d.add_edge(vs[i], vs[j], EdgeKind::Hadamard);
            }
        }
    }
    let mut outs = Vec::new();
    if n > 0 {
        for _ in 0..outputs {
            let b = d.add_vertex(VertexKind::Boundary);
            let e = if rng.gen_bool(0.5) { EdgeKind::Plain } else { EdgeKind::Hadamard };
            d.add_edge(vs[rng.gen_range(0..n)], b, e);
            outs.push(b);
        }
    }
    d.set_outputs(outs);
    d
}

/// A random host around `base`: Hadamard edges among the `attach` vertices
/// with probability `p / 2`, plus `n` random spiders, each H-connected with
/// probability `p` to every `attach` vertex and to each other.
pub fn embed_in_random_host<R: Rng>(rng: &mut R, base: &Diagram, attach: &[usize], n: usize, p: f64) -> Diagram {
    let mut d = base.clone();
    for i in 0..attach.len() {
        for j in i + 1..attach.len() {
            if rng.gen_bool(p / 2.0) {
                d.add_edge_smart(attach[i], attach[j], EdgeKind::Hadamard);
            }
        }
    }
    let mut extra = Vec::new();
    for _ in 0..n {
        let v = d.add_z(Phase::new(rng.gen_range(0..8)));
        for &a in attach {
            if rng.gen_bool(p) {
                d.add_edge_smart(v, a, EdgeKind::Hadamard);
            }
        }
        for &w in &extra {
            if rng.gen_bool(p) {
                d.add_edge_smart(v, w, EdgeKind::Hadamard);
            }
        }
        extra.push(v);
    }
    d
}
