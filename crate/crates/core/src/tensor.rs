//! Dense tensor evaluation of small diagrams.
//!
//! This is the reference semantics the rewrite rules and decompositions are
//! tested against. It contracts vertex and edge tensors one at a time into a
//! single accumulator, so it is only usable for diagrams whose contraction
//! frontier stays small.

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::{Diagram, EdgeKind, VertexKind, V};

/// Largest number of open indices the accumulator may carry.
pub const MAX_FRONTIER: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("contraction frontier of {0} indices exceeds the limit of {MAX_FRONTIER}")]
    TooLarge(usize),
    #[error("H-box {0} must have exactly two legs")]
    BadHBox(V),
    #[error("boundary vertex {0} is neither an input nor an output")]
    DanglingBoundary(V),
}

/// The linear map of an open diagram.
///
/// `data[(i << n_out) | o] = ⟨o| D |i⟩`. Within `i` (and `o`), wire 0 is the
/// most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub n_in: usize,
    pub n_out: usize,
    pub data: Vec<Complex64>,
}

impl Tensor {
    pub fn zeros(n_in: usize, n_out: usize) -> Tensor {
        Tensor { n_in, n_out, data: vec![Complex64::new(0.0, 0.0); 1 << (n_in + n_out)] }
    }

    pub fn scalar(z: Complex64) -> Tensor {
        Tensor { n_in: 0, n_out: 0, data: vec![z] }
    }

    pub fn get(&self, i: usize, o: usize) -> Complex64 {
        self.data[(i << self.n_out) | o]
    }

    pub fn scale(&mut self, z: Complex64) {
        for x in self.data.iter_mut() {
            *x *= z;
        }
    }

    pub fn add(&mut self, other: &Tensor) {
        assert_eq!((self.n_in, self.n_out), (other.n_in, other.n_out), "tensor shape mismatch");
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += *y;
        }
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        assert_eq!((self.n_in, self.n_out), (other.n_in, other.n_out), "tensor shape mismatch");
        self.data.iter().zip(&other.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Entrywise equality up to `tol`, relative to the larger of 1 and the biggest entry.
    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        if (self.n_in, self.n_out) != (other.n_in, other.n_out) {
            return false;
        }
        let scale = self.data.iter().chain(&other.data).map(|x| x.norm()).fold(1.0, f64::max);
        self.max_abs_diff(other) <= tol * scale
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.norm() <= tol)
    }
}

/// A dense tensor over a list of labels; label `k` in `labels` is bit `k` of the index.
#[derive(Clone)]
struct Labeled {
    labels: Vec<usize>,
    data: Vec<Complex64>,
}

fn contract(a: &Labeled, b: &Labeled) -> Labeled {
    // positions in b of every label of a (if shared)
    let a_in_b: Vec<Option<usize>> = a.labels.iter().map(|l| b.labels.iter().position(|m| m == l)).collect();
    let b_only: Vec<usize> = (0..b.labels.len()).filter(|&j| !a.labels.contains(&b.labels[j])).collect();
    let a_only: Vec<usize> = (0..a.labels.len()).filter(|&i| a_in_b[i].is_none()).collect();

    let mut labels: Vec<usize> = a_only.iter().map(|&i| a.labels[i]).collect();
    labels.extend(b_only.iter().map(|&j| b.labels[j]));
    let na = a_only.len();
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];

    for (ia, &va) in a.data.iter().enumerate() {
        if va.re == 0.0 && va.im == 0.0 {
            continue;
        }
        let mut out_a = 0usize;
        let mut ib_base = 0usize;
        for (i, pos) in a_in_b.iter().enumerate() {
            let bit = (ia >> i) & 1;
            if let Some(j) = pos { ib_base |= bit << j }
        }
        for (k, &i) in a_only.iter().enumerate() {
            out_a |= ((ia >> i) & 1) << k;
        }
        for bo in 0..(1usize << b_only.len()) {
            let mut ib = ib_base;
            for (k, &j) in b_only.iter().enumerate() {
                ib |= ((bo >> k) & 1) << j;
            }
            let vb = b.data[ib];
            if vb.re == 0.0 && vb.im == 0.0 {
                continue;
            }
            data[out_a | (bo << na)] += va * vb;
        }
    }
    Labeled { labels, data }
}

fn spider_tensor(kind: VertexKind, labels: Vec<usize>) -> Labeled {
    let n = labels.len();
    let w = Complex64::from_polar(1.0, kind.phase().eighths() as f64 * std::f64::consts::FRAC_PI_4);
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << n];
    match kind {
        VertexKind::Z(_) => {
            data[0] += 1.0;
            data[(1 << n) - 1] += w;
        }
        VertexKind::X(_) => {
            let norm = 2f64.powf(-(n as f64) / 2.0);
            for (idx, x) in data.iter_mut().enumerate() {
                let sign = if idx.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                *x = (Complex64::new(1.0, 0.0) + w * sign) * norm;
            }
        }
        _ => unreachable!(),
    }
    Labeled { labels, data }
}

fn hadamard(l0: usize, l1: usize) -> Labeled {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Labeled {
        labels: vec![l0, l1],
        data: vec![h.into(), h.into(), h.into(), (-h).into()],
    }
}

fn delta(l0: usize, l1: usize) -> Labeled {
    Labeled { labels: vec![l0, l1], data: vec![1.0.into(), 0.0.into(), 0.0.into(), 1.0.into()] }
}

/// Evaluates a diagram of any shape (X-spiders, H-boxes, loops, parallel edges) as a dense tensor.
pub fn to_tensor(d: &Diagram) -> Result<Tensor, TensorError> {
    let edges = d.edges();
    // edge k has end labels 2k (at its first vertex) and 2k+1 (at its second)
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); d.id_bound()];
    let mut pieces: Vec<Labeled> = Vec::new();
    for (k, &(a, b, e)) in edges.iter().enumerate() {
        ends[a].push(2 * k);
        ends[b].push(2 * k + 1);
        pieces.push(match e {
            EdgeKind::Plain => delta(2 * k, 2 * k + 1),
            EdgeKind::Hadamard => hadamard(2 * k, 2 * k + 1),
        });
    }

    let mut open_label = std::collections::HashMap::new();
    for v in d.vertices() {
        let kind = d.kind(v);
        match kind {
            VertexKind::Z(_) | VertexKind::X(_) => pieces.push(spider_tensor(kind, ends[v].clone())),
            VertexKind::HBox => {
                if ends[v].len() != 2 {
                    return Err(TensorError::BadHBox(v));
                }
                pieces.push(hadamard(ends[v][0], ends[v][1]));
            }
            VertexKind::Boundary => {
                // boundaries carry no tensor; their edge end is left open
                if let Some(&l) = ends[v].first() {
                    open_label.insert(v, l);
                }
            }
        }
    }

    let wires: Vec<V> = d.inputs().iter().chain(d.outputs()).copied().collect();
    for v in d.vertices().filter(|&v| d.is_boundary(v)) {
        if !wires.contains(&v) {
            return Err(TensorError::DanglingBoundary(v));
        }
    }

    let mut acc = Labeled { labels: Vec::new(), data: vec![Complex64::new(1.0, 0.0)] };
    while !pieces.is_empty() {
        // greedily pick the piece giving the smallest accumulator, preferring more shared labels
        let (best, _) = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let shared = p.labels.iter().filter(|l| acc.labels.contains(l)).count();
                let size = acc.labels.len() + p.labels.len() - 2 * shared;
                (i, (size, usize::MAX - shared))
            })
            .min_by_key(|&(_, key)| key)
            .unwrap();
        let p = pieces.swap_remove(best);
        let size = acc.labels.len() + p.labels.len();
        if size > MAX_FRONTIER + 8 {
            return Err(TensorError::TooLarge(size));
        }
        acc = contract(&acc, &p);
        if acc.labels.len() > MAX_FRONTIER {
            return Err(TensorError::TooLarge(acc.labels.len()));
        }
    }

    // reorder into wire order, wire 0 most significant
    let n = wires.len();
    let pos: Vec<usize> = wires
        .iter()
        .map(|w| acc.labels.iter().position(|l| *l == open_label[w]).expect("open wire label"))
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (idx, &val) in acc.data.iter().enumerate() {
        let mut out = 0usize;
        for (k, &p) in pos.iter().enumerate() {
            out |= ((idx >> p) & 1) << (n - 1 - k);
        }
        data[out] = val;
    }
    let s = d.scalar().to_complex();
    for x in data.iter_mut() {
        *x *= s;
    }
    Ok(Tensor { n_in: d.inputs().len(), n_out: d.outputs().len(), data })
}

/// Value of a closed diagram.
pub fn evaluate(d: &Diagram) -> Result<Complex64, TensorError> {
    to_tensor(d).map(|t| t.data.iter().sum())
}
