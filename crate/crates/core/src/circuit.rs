//! Clifford+T circuits and their translation to ZX-diagrams.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Diagram, EdgeKind, Phase, VertexKind, V};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    /// `diag(1, e^{ikπ/4})`, `k` in `0..8`.
    Rz(usize, u8),
    CX(usize, usize),
    CZ(usize, usize),
    CCZ(usize, usize, usize),
    /// `(I + P)/2 + e^{ikπ/4}(I − P)/2` for the Pauli string `P` given by
    /// its non-identity letters; `k` odd.
    PauliExp(Vec<(usize, Pauli)>, u8),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) | Gate::Rz(q, _) => {
                vec![*q]
            }
            Gate::CX(a, b) | Gate::CZ(a, b) => vec![*a, *b],
            Gate::CCZ(a, b, c) => vec![*a, *b, *c],
            Gate::PauliExp(ps, _) => ps.iter().map(|&(q, _)| q).collect(),
        }
    }

    /// Number of T-like phases the gate contributes in its ZX translation.
    pub fn t_count(&self) -> usize {
        match self {
            Gate::T(_) | Gate::Tdg(_) => 1,
            Gate::Rz(_, k) => (*k % 2) as usize,
            Gate::CCZ(..) => 7,
            Gate::PauliExp(_, k) => (*k % 2) as usize,
            _ => 0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {index} uses qubit {qubit}, but the circuit has {qubits} qubits")]
    QubitOutOfRange { index: usize, qubit: usize, qubits: usize },
    #[error("gate {index} repeats qubit {qubit}")]
    RepeatedQubit { index: usize, qubit: usize },
    #[error("gate {index}: Pauli exponential needs a non-empty support and an odd multiple of π/4")]
    BadPauliExp { index: usize },
    #[error("state spec has {got} entries for {qubits} qubits")]
    SpecMismatch { got: usize, qubits: usize },
    #[error("invalid state spec character `{0}` (expected 0, 1, + or -)")]
    BadSpec(char),
    #[error("{0}")]
    Generator(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Circuit {
        Circuit { qubits, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, g) in self.gates.iter().enumerate() {
            let qs = g.qubits();
            for (i, &q) in qs.iter().enumerate() {
                if q >= self.qubits {
                    return Err(CircuitError::QubitOutOfRange { index, qubit: q, qubits: self.qubits });
                }
                if qs[..i].contains(&q) {
                    return Err(CircuitError::RepeatedQubit { index, qubit: q });
                }
            }
            if let Gate::PauliExp(ps, k) = g {
                if ps.is_empty() || k % 2 == 0 || *k >= 8 {
                    return Err(CircuitError::BadPauliExp { index });
                }
            }
        }
        Ok(())
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().map(Gate::t_count).sum()
    }
}

/// A single-qubit stabiliser state or effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Zero,
    One,
    Plus,
    Minus,
}

impl Basis {
    pub fn symbol(self) -> char {
        match self {
            Basis::Zero => '0',
            Basis::One => '1',
            Basis::Plus => '+',
            Basis::Minus => '-',
        }
    }

    /// The normalised state as one spider with one leg (the scalar carries the 1/√2).
    fn spider(self) -> (VertexKind, ExactScalar) {
        let kind = match self {
            Basis::Zero => VertexKind::X(Phase::ZERO),
            Basis::One => VertexKind::X(Phase::PI),
            Basis::Plus => VertexKind::Z(Phase::ZERO),
            Basis::Minus => VertexKind::Z(Phase::PI),
        };
        (kind, ExactScalar::sqrt2_pow(-1))
    }
}

/// One basis state per qubit, written as a string over `0 1 + -`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSpec(pub Vec<Basis>);

impl StateSpec {
    pub fn uniform(n: usize, b: Basis) -> StateSpec {
        StateSpec(vec![b; n])
    }

    pub fn from_bits(bits: &[bool]) -> StateSpec {
        StateSpec(bits.iter().map(|&b| if b { Basis::One } else { Basis::Zero }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for StateSpec {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, CircuitError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Basis::Zero),
                '1' => Ok(Basis::One),
                '+' => Ok(Basis::Plus),
                '-' => Ok(Basis::Minus),
                other => Err(CircuitError::BadSpec(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(StateSpec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.symbol())?;
        }
        Ok(())
    }
}

/// The 7-T realisation of CCZ used throughout.
pub fn ccz_expansion(a: usize, b: usize, c: usize) -> [Gate; 13] {
    [
        Gate::CX(b, c),
        Gate::Tdg(c),
        Gate::CX(a, c),
        Gate::T(c),
        Gate::CX(b, c),
        Gate::Tdg(c),
        Gate::CX(a, c),
        Gate::T(b),
        Gate::T(c),
        Gate::CX(a, b),
        Gate::T(a),
        Gate::Tdg(b),
        Gate::CX(a, b),
    ]
}

/// Incremental translation of gates onto open wires.
struct Builder {
    d: Diagram,
    /// Last vertex on each wire and the kind of the edge still to be placed after it.
    wires: Vec<(V, EdgeKind)>,
}

impl Builder {
    fn new(n: usize) -> Builder {
        let mut d = Diagram::new();
        let mut wires = Vec::new();
        let mut inputs = Vec::new();
        for _ in 0..n {
            let b = d.add_vertex(VertexKind::Boundary);
            inputs.push(b);
            wires.push((b, EdgeKind::Plain));
        }
        d.set_inputs(inputs);
        Builder { d, wires }
    }

    fn spider(&mut self, q: usize, kind: VertexKind) -> V {
        let (last, e) = self.wires[q];
        let s = self.d.add_vertex(kind);
        self.d.add_edge(last, s, e);
        self.wires[q] = (s, EdgeKind::Plain);
        s
    }

    fn z(&mut self, q: usize, k: i64) -> V {
        self.spider(q, VertexKind::Z(Phase::new(k)))
    }

    fn h(&mut self, q: usize) {
        self.wires[q].1 = self.wires[q].1.toggled();
    }

    fn gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => self.h(q),
            Gate::X(q) => {
                self.spider(q, VertexKind::X(Phase::PI));
            }
            Gate::Z(q) => {
                self.z(q, 4);
            }
            Gate::S(q) => {
                self.z(q, 2);
            }
            Gate::Sdg(q) => {
                self.z(q, 6);
            }
            Gate::T(q) => {
                self.z(q, 1);
            }
            Gate::Tdg(q) => {
                self.z(q, 7);
            }
            Gate::Rz(q, k) => {
                self.z(q, k as i64);
            }
            Gate::CX(c, t) => {
                let a = self.z(c, 0);
                let b = self.spider(t, VertexKind::X(Phase::ZERO));
                self.d.add_edge(a, b, EdgeKind::Plain);
                self.d.scalar_mut().mul_sqrt2_pow(1);
            }
            Gate::CZ(x, y) => {
                let a = self.z(x, 0);
                let b = self.z(y, 0);
                self.d.add_edge(a, b, EdgeKind::Hadamard);
                self.d.scalar_mut().mul_sqrt2_pow(1);
            }
            Gate::CCZ(a, b, c) => {
                for g in ccz_expansion(a, b, c) {
                    self.gate(&g);
                }
            }
            Gate::PauliExp(ref ps, k) => {
                // rotate every factor to Z, apply a Z-parity phase gadget, rotate back
                for &(q, p) in ps {
                    match p {
                        Pauli::X => self.h(q),
                        Pauli::Y => {
                            self.z(q, 6);
                            self.h(q);
                        }
                        Pauli::Z => {}
                    }
                }
                let hub = self.d.add_z(Phase::ZERO);
                let leaf = self.d.add_z(Phase::new(k as i64));
                self.d.add_edge(hub, leaf, EdgeKind::Hadamard);
                for &(q, _) in ps {
                    let w = self.z(q, 0);
                    self.d.add_edge(w, hub, EdgeKind::Hadamard);
                }
                self.d.scalar_mut().mul_sqrt2_pow(ps.len() as i32 - 1);
                for &(q, p) in ps {
                    match p {
                        Pauli::X => self.h(q),
                        Pauli::Y => {
                            self.h(q);
                            self.z(q, 2);
                        }
                        Pauli::Z => {}
                    }
                }
            }
        }
    }

    fn finish(mut self) -> Diagram {
        let mut outputs = Vec::new();
        for &(last, e) in &self.wires {
            let b = self.d.add_vertex(VertexKind::Boundary);
            self.d.add_edge(last, b, e);
            outputs.push(b);
        }
        self.d.set_outputs(outputs);
        self.d
    }
}

/// The circuit as an open diagram (one input and one output per qubit).
pub fn circuit_to_open_diagram(c: &Circuit) -> Result<Diagram, CircuitError> {
    c.validate()?;
    let mut b = Builder::new(c.qubits);
    for g in &c.gates {
        b.gate(g);
    }
    Ok(b.finish())
}

fn basis_diagram(b: Basis, as_state: bool) -> Diagram {
    let (kind, s) = b.spider();
    let mut d = if as_state { Diagram::spider(kind, 0, 1) } else { Diagram::spider(kind, 1, 0) };
    d.set_scalar(s);
    d
}

/// The closed diagram `⟨output| C |input⟩`.
pub fn circuit_to_diagram(c: &Circuit, input: &StateSpec, output: &StateSpec) -> Result<Diagram, CircuitError> {
    for spec in [input, output] {
        if spec.len() != c.qubits {
            return Err(CircuitError::SpecMismatch { got: spec.len(), qubits: c.qubits });
        }
    }
    let open = circuit_to_open_diagram(c)?;
    let states: Vec<Diagram> = input.0.iter().map(|&b| basis_diagram(b, true)).collect();
    let effects: Vec<Diagram> = output.0.iter().map(|&b| basis_diagram(b, false)).collect();
    Ok(open.plug_boundaries(&states, &effects).expect("arity checked above"))
}

/// The closed diagram `⟨ψ| (Π ⊗ I) |ψ⟩` with `|ψ⟩ = C|input⟩` and `Π` the
/// projector onto the given computational-basis values of the listed qubits,
/// i.e. the probability of observing those values. Built as `A†A` with
/// `A = (⟨b| ⊗ I) C |input⟩`, so its T-count is twice that of the circuit.
pub fn marginal_diagram(c: &Circuit, input: &StateSpec, fixed: &[(usize, bool)]) -> Result<Diagram, CircuitError> {
    if input.len() != c.qubits {
        return Err(CircuitError::SpecMismatch { got: input.len(), qubits: c.qubits });
    }
    for (i, &(q, _)) in fixed.iter().enumerate() {
        if q >= c.qubits {
            return Err(CircuitError::QubitOutOfRange { index: i, qubit: q, qubits: c.qubits });
        }
        if fixed[..i].iter().any(|&(p, _)| p == q) {
            return Err(CircuitError::RepeatedQubit { index: i, qubit: q });
        }
    }
    let open = circuit_to_open_diagram(c)?;
    let states: Vec<Diagram> = input.0.iter().map(|&b| basis_diagram(b, true)).collect();
    let mut prep = Diagram::new();
    for s in &states {
        prep = prep.tensor(s);
    }
    let psi = prep.compose(&open).expect("arity checked above");
    let mut post = Diagram::new();
    for q in 0..c.qubits {
        let piece = match fixed.iter().find(|&&(p, _)| p == q) {
            Some(&(_, b)) => basis_diagram(if b { Basis::One } else { Basis::Zero }, false),
            None => Diagram::identity(1),
        };
        post = post.tensor(&piece);
    }
    let a = psi.compose(&post).expect("arity checked above");
    Ok(a.compose(&a.adjoint()).expect("adjoint has matching arity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{dense_oracle, gate_matrix_oracle};
    use crate::tensor::{evaluate, to_tensor};
    use num_complex::Complex64;

    fn amp(c: &Circuit, i: &str, o: &str) -> Complex64 {
        evaluate(&circuit_to_diagram(c, &i.parse().unwrap(), &o.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn cx_and_ccz_amplitudes() {
        let mut c = Circuit::new(2);
        c.push(Gate::CX(0, 1));
        assert!((amp(&c, "00", "00") - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((amp(&c, "10", "11") - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(amp(&c, "10", "10").norm() < 1e-12);

        let mut c = Circuit::new(3);
        c.push(Gate::CCZ(0, 1, 2));
        assert_eq!(circuit_to_open_diagram(&c).unwrap().tcount(), 7);
        assert!((amp(&c, "111", "111") - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((amp(&c, "110", "110") - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pauli_exp_zz() {
        let mut c = Circuit::new(2);
        c.push(Gate::PauliExp(vec![(0, Pauli::Z), (1, Pauli::Z)], 1));
        // ⟨++| e^{iθ}(cos θ − i sin θ ZZ) |++⟩ = e^{iθ} cos θ with θ = π/8
        let th = std::f64::consts::PI / 8.0;
        let expect = Complex64::from_polar(th.cos(), th);
        assert!((amp(&c, "++", "++") - expect).norm() < 1e-12);
    }

    #[test]
    fn every_gate_matches_its_matrix() {
        let gates = vec![
            Gate::H(0),
            Gate::X(1),
            Gate::Z(0),
            Gate::S(1),
            Gate::Sdg(0),
            Gate::T(1),
            Gate::Tdg(0),
            Gate::Rz(1, 5),
            Gate::CX(1, 0),
            Gate::CZ(0, 1),
            Gate::CCZ(2, 0, 1),
            Gate::PauliExp(vec![(0, Pauli::X)], 3),
            Gate::PauliExp(vec![(1, Pauli::Y)], 1),
            Gate::PauliExp(vec![(2, Pauli::Y), (0, Pauli::X), (1, Pauli::Z)], 7),
        ];
        for g in gates {
            let mut c = Circuit::new(3);
            c.push(g.clone());
            let t = to_tensor(&circuit_to_open_diagram(&c).unwrap()).unwrap();
            let m = gate_matrix_oracle(&c).unwrap();
            assert!(t.approx_eq(&m, 1e-10), "{g:?}: max diff {}", t.max_abs_diff(&m));
        }
    }

    #[test]
    fn closed_diagram_matches_state_vector() {
        let mut c = Circuit::new(3);
        for g in [Gate::H(0), Gate::CX(0, 1), Gate::T(1), Gate::CCZ(0, 1, 2), Gate::H(2), Gate::S(2)] {
            c.push(g);
        }
        for (i, o) in [("000", "110"), ("+-0", "1+-"), ("111", "---")] {
            let (si, so) = (i.parse().unwrap(), o.parse().unwrap());
            let z = evaluate(&circuit_to_diagram(&c, &si, &so).unwrap()).unwrap();
            assert!((z - dense_oracle(&c, &si, &so).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn marginals_match_state_vector() {
        use crate::dense::dense_state;
        let mut c = Circuit::new(3);
        for g in [Gate::H(0), Gate::T(0), Gate::CX(0, 1), Gate::H(1), Gate::CCZ(0, 1, 2), Gate::H(2), Gate::S(2)] {
            c.push(g);
        }
        let v = dense_state(&c).unwrap();
        let zero = StateSpec::uniform(3, Basis::Zero);
        for fixed in [vec![(0, true)], vec![(1, false), (2, true)], vec![(2, false), (0, false), (1, true)]] {
            let expect: f64 = v
                .iter()
                .enumerate()
                .filter(|(i, _)| fixed.iter().all(|&(q, b)| ((i >> (2 - q)) & 1 == 1) == b))
                .map(|(_, a)| a.norm_sqr())
                .sum();
            let d = marginal_diagram(&c, &zero, &fixed).unwrap();
            assert_eq!(d.tcount(), 2 * c.t_count());
            let z = evaluate(&d).unwrap();
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-12, "{fixed:?}: {z} vs {expect}");
        }
    }

    #[test]
    fn validation() {
        let mut c = Circuit::new(2);
        c.push(Gate::CX(0, 2));
        assert!(matches!(c.validate(), Err(CircuitError::QubitOutOfRange { .. })));
        let mut c = Circuit::new(2);
        c.push(Gate::CZ(1, 1));
        assert!(matches!(c.validate(), Err(CircuitError::RepeatedQubit { .. })));
        let mut c = Circuit::new(2);
        c.push(Gate::PauliExp(vec![(0, Pauli::X)], 2));
        assert!(matches!(c.validate(), Err(CircuitError::BadPauliExp { .. })));
        assert!("01+x".parse::<StateSpec>().is_err());
        let c = Circuit::new(2);
        assert!(circuit_to_diagram(&c, &"0".parse().unwrap(), &"00".parse().unwrap()).is_err());
    }
}
