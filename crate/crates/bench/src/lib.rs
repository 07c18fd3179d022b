//! Fixed workloads shared by the criterion benches.

use catzx::circuit::{circuit_to_diagram, Basis, StateSpec};
use catzx::generate::{gen_hidden_shift, gen_random_cliffordt};
use catzx::Diagram;

/// Closed diagram `⟨s|C|0…0⟩` of a hidden-shift circuit at its shift.
pub fn hidden_shift_diagram(qubits: usize, ccz: usize, seed: u64) -> Diagram {
    let (c, s) = gen_hidden_shift(qubits, ccz, seed).expect("valid hidden-shift parameters");
    circuit_to_diagram(&c, &StateSpec::uniform(qubits, Basis::Zero), &StateSpec::from_bits(&s)).unwrap()
}

/// Closed diagram `⟨0…0|C|0…0⟩` of a random Pauli-exponential circuit.
pub fn cliffordt_diagram(qubits: usize, t: usize, seed: u64) -> Diagram {
    let c = gen_random_cliffordt(qubits, t, seed).expect("valid Clifford+T parameters");
    let zero = StateSpec::uniform(qubits, Basis::Zero);
    circuit_to_diagram(&c, &zero, &zero).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_closed() {
        let d = hidden_shift_diagram(8, 4, 0);
        assert!(d.inputs().is_empty() && d.outputs().is_empty());
        assert_eq!(d.tcount(), 28);
        assert_eq!(cliffordt_diagram(6, 12, 0).tcount(), 12);
    }
}
