//! Benchmark circuit families. All generators use `ChaCha8Rng` seeded with
//! `seed_from_u64`, so a seed names the same circuit on every platform.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitError, Gate, Pauli};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `t` random Pauli exponentials, each of weight 2, 3 or 4 with an odd
/// multiple of π/4 as angle.
pub fn gen_random_cliffordt(qubits: usize, t: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if qubits < 4 {
        return Err(CircuitError::Generator(format!("need at least 4 qubits for weight-4 exponentials, got {qubits}")));
    }
    if t == 0 {
        return Err(CircuitError::Generator("t must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut c = Circuit::new(qubits);
    for _ in 0..t {
        let w = rng.gen_range(2..=4);
        let mut support = sample(&mut rng, qubits, w).into_vec();
        support.sort_unstable();
        let ps = support
            .into_iter()
            .map(|q| (q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]))
            .collect();
        let k = 2 * rng.gen_range(0..4u8) + 1;
        c.push(Gate::PauliExp(ps, k));
    }
    Ok(c)
}

/// A hidden-shift circuit for the bent function `f(x, y) = g(x) ⊕ x·y` on
/// `qubits = 2m` bits. Returns the circuit and the shift `s`; the circuit
/// maps `|0…0⟩` to `|s⟩`.
///
/// `g` holds `ccz_count / 2` CCZs on random triples of `m` qubits plus random
/// CZ and Z terms. The circuit is `H Ô_f̃ Z^s H O_f H Z^s` (rightmost first),
/// where `Z^s H … H Z^s` is the shifted oracle `H X^s O_f X^s H` written in
/// the gate set {H, Z, CZ, CCZ}. `O_g` occurs twice, so the CCZ total is
/// `ccz_count`, which must therefore be even.
pub fn gen_hidden_shift(qubits: usize, ccz_count: usize, seed: u64) -> Result<(Circuit, Vec<bool>), CircuitError> {
    if qubits == 0 || !qubits.is_multiple_of(2) {
        return Err(CircuitError::Generator(format!("qubit count must be even and positive, got {qubits}")));
    }
    if !ccz_count.is_multiple_of(2) {
        return Err(CircuitError::Generator(format!("ccz_count must be even, got {ccz_count}")));
    }
    let m = qubits / 2;
    if ccz_count > 0 && m < 3 {
        return Err(CircuitError::Generator("CCZ terms need at least 6 qubits".into()));
    }
    let mut rng = rng_from_seed(seed);
    let shift: Vec<bool> = (0..qubits).map(|_| rng.gen_bool(0.5)).collect();

    // g as gates on register offsets 0..m
    let mut g: Vec<Gate> = Vec::new();
    for _ in 0..ccz_count / 2 {
        let t = sample(&mut rng, m, 3).into_vec();
        g.push(Gate::CCZ(t[0], t[1], t[2]));
    }
    if m >= 2 {
        for _ in 0..m {
            let p = sample(&mut rng, m, 2).into_vec();
            if rng.gen_bool(0.5) {
                g.push(Gate::CZ(p[0], p[1]));
            }
        }
    }
    for q in 0..m {
        if rng.gen_bool(0.5) {
            g.push(Gate::Z(q));
        }
    }
    let shifted = |gate: &Gate, off: usize| match *gate {
        Gate::CCZ(a, b, c) => Gate::CCZ(a + off, b + off, c + off),
        Gate::CZ(a, b) => Gate::CZ(a + off, b + off),
        Gate::Z(a) => Gate::Z(a + off),
        _ => unreachable!(),
    };

    let mut c = Circuit::new(qubits);
    let z_shift = |c: &mut Circuit| {
        for (q, &b) in shift.iter().enumerate() {
            if b {
                c.push(Gate::Z(q));
            }
        }
    };
    let h_all = |c: &mut Circuit| {
        for q in 0..qubits {
            c.push(Gate::H(q));
        }
    };
    let inner = |c: &mut Circuit| {
        for i in 0..m {
            c.push(Gate::CZ(i, m + i));
        }
    };

    z_shift(&mut c);
    h_all(&mut c);
    for gate in &g {
        c.push(shifted(gate, 0));
    }
    inner(&mut c);
    h_all(&mut c);
    z_shift(&mut c);
    for gate in &g {
        c.push(shifted(gate, m));
    }
    inner(&mut c);
    h_all(&mut c);
    Ok((c, shift))
}

/// A random circuit over the full gate set, for testing. Roughly
/// `t_fraction` of the gates are T-like; the rest are Clifford, with an
/// occasional CCZ or Pauli exponential mixed into the T-like share.
pub fn gen_random_circuit(qubits: usize, gates: usize, t_fraction: f64, seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    let mut c = Circuit::new(qubits);
    let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..qubits);
    for _ in 0..gates {
        let q = pick(&mut rng);
        if rng.gen_bool(t_fraction) {
            match rng.gen_range(0..10) {
                0 if qubits >= 3 => {
                    let t = sample(&mut rng, qubits, 3).into_vec();
                    c.push(Gate::CCZ(t[0], t[1], t[2]));
                }
                1 | 2 => {
                    let w = rng.gen_range(1..=qubits.min(3));
                    let ps = sample(&mut rng, qubits, w)
                        .into_iter()
                        .map(|q| (q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]))
                        .collect();
                    c.push(Gate::PauliExp(ps, 2 * rng.gen_range(0..4u8) + 1));
                }
                3 => c.push(Gate::Rz(q, 2 * rng.gen_range(0..4u8) + 1)),
                4..=6 => c.push(Gate::T(q)),
                _ => c.push(Gate::Tdg(q)),
            }
        } else {
            match rng.gen_range(0..8) {
                0 | 1 => c.push(Gate::H(q)),
                2 => c.push(Gate::S(q)),
                3 => c.push(if rng.gen_bool(0.5) { Gate::X(q) } else { Gate::Z(q) }),
                4 => c.push(Gate::Sdg(q)),
                _ if qubits >= 2 => {
                    let p = sample(&mut rng, qubits, 2).into_vec();
                    c.push(if rng.gen_bool(0.6) { Gate::CX(p[0], p[1]) } else { Gate::CZ(p[0], p[1]) });
                }
                _ => c.push(Gate::H(q)),
            }
        }
    }
    c
}
