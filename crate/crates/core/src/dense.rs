//! Dense state-vector simulation, the ground truth for small circuits.
//!
//! Basis index bit `n - 1 - q` holds qubit `q` (qubit 0 is the most
//! significant bit), matching the tensor convention of [`crate::tensor`].

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Basis, Circuit, CircuitError, Gate, Pauli, StateSpec};
use crate::tensor::Tensor;

pub const MAX_DENSE_QUBITS: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DenseError {
    #[error("dense oracle limited to {MAX_DENSE_QUBITS} qubits, circuit has {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn omega(k: u8) -> Complex64 {
    Complex64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4)
}

fn basis_amps(b: Basis) -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match b {
        Basis::Zero => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        Basis::One => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        Basis::Plus => [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
        Basis::Minus => [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
    }
}

fn product_state(spec: &StateSpec) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(1.0, 0.0)];
    for &b in &spec.0 {
        let a = basis_amps(b);
        v = v.iter().flat_map(|&x| [x * a[0], x * a[1]]).collect();
    }
    v
}

struct State {
    n: usize,
    amps: Vec<Complex64>,
}

impl State {
    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn phase_if(&mut self, pred: impl Fn(usize) -> bool, z: Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if pred(i) {
                *a *= z;
            }
        }
    }

    fn h(&mut self, q: usize) {
        let m = self.mask(q);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a, b) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = (a + b) * r;
                self.amps[i | m] = (a - b) * r;
            }
        }
    }

    fn x(&mut self, q: usize) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
    }

    fn rz(&mut self, q: usize, k: u8) {
        let m = self.mask(q);
        self.phase_if(|i| i & m != 0, omega(k));
    }

    /// `P|ψ⟩` for a Pauli string.
    fn pauli(&self, ps: &[(usize, Pauli)]) -> Vec<Complex64> {
        let mut flip = 0;
        for &(q, p) in ps {
            if p != Pauli::Z {
                flip |= self.mask(q);
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut z = a;
            for &(q, p) in ps {
                let bit = i & self.mask(q) != 0;
                z *= match (p, bit) {
                    (Pauli::X, _) => Complex64::new(1.0, 0.0),
                    (Pauli::Y, false) => Complex64::new(0.0, 1.0),
                    (Pauli::Y, true) => Complex64::new(0.0, -1.0),
                    (Pauli::Z, false) => Complex64::new(1.0, 0.0),
                    (Pauli::Z, true) => Complex64::new(-1.0, 0.0),
                };
            }
            out[i ^ flip] += z;
        }
        out
    }

    fn apply(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => self.h(q),
            Gate::X(q) => self.x(q),
            Gate::Z(q) => self.rz(q, 4),
            Gate::S(q) => self.rz(q, 2),
            Gate::Sdg(q) => self.rz(q, 6),
            Gate::T(q) => self.rz(q, 1),
            Gate::Tdg(q) => self.rz(q, 7),
            Gate::Rz(q, k) => self.rz(q, k),
            Gate::CX(c, t) => {
                let (mc, mt) = (self.mask(c), self.mask(t));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::CZ(a, b) => {
                let m = self.mask(a) | self.mask(b);
                self.phase_if(|i| i & m == m, Complex64::new(-1.0, 0.0));
            }
            Gate::CCZ(a, b, c) => {
                let m = self.mask(a) | self.mask(b) | self.mask(c);
                self.phase_if(|i| i & m == m, Complex64::new(-1.0, 0.0));
            }
            Gate::PauliExp(ref ps, k) => {
                // (I + P)/2 + ω^k (I − P)/2
                let p = self.pauli(ps);
                let w = omega(k);
                for (a, pa) in self.amps.iter_mut().zip(p) {
                    *a = (*a + pa) * 0.5 + w * (*a - pa) * 0.5;
                }
            }
        }
    }
}

/// `⟨output| C |input⟩` by direct state-vector evolution.
pub fn dense_oracle(c: &Circuit, input: &StateSpec, output: &StateSpec) -> Result<Complex64, DenseError> {
    if c.qubits > MAX_DENSE_QUBITS {
        return Err(DenseError::TooLarge(c.qubits));
    }
    c.validate()?;
    for spec in [input, output] {
        if spec.len() != c.qubits {
            return Err(CircuitError::SpecMismatch { got: spec.len(), qubits: c.qubits }.into());
        }
    }
    let psi = run(c, product_state(input));
    let phi = product_state(output);
    Ok(phi.iter().zip(&psi).map(|(a, b)| a.conj() * b).sum())
}

/// Final state vector from `|0…0⟩`.
pub fn dense_state(c: &Circuit) -> Result<Vec<Complex64>, DenseError> {
    if c.qubits > MAX_DENSE_QUBITS {
        return Err(DenseError::TooLarge(c.qubits));
    }
    c.validate()?;
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << c.qubits];
    v[0] = Complex64::new(1.0, 0.0);
    Ok(run(c, v))
}

fn run(c: &Circuit, amps: Vec<Complex64>) -> Vec<Complex64> {
    let mut s = State { n: c.qubits, amps };
    for g in &c.gates {
        s.apply(g);
    }
    s.amps
}

/// The full unitary as a tensor, column by column.
pub fn gate_matrix_oracle(c: &Circuit) -> Result<Tensor, DenseError> {
    if c.qubits > MAX_DENSE_QUBITS / 2 {
        return Err(DenseError::TooLarge(c.qubits));
    }
    c.validate()?;
    let n = c.qubits;
    let mut t = Tensor::zeros(n, n);
    for i in 0..1usize << n {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[i] = Complex64::new(1.0, 0.0);
        for (o, a) in run(c, v).into_iter().enumerate() {
            t.data[(i << n) | o] = a;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn fixtures() {
        let c = Circuit::new(3);
        let p: StateSpec = "+++".parse().unwrap();
        assert!(close(dense_oracle(&c, &p, &p).unwrap(), Complex64::new(1.0, 0.0)));

        let mut c = Circuit::new(1);
        c.push(Gate::T(0));
        let p: StateSpec = "+".parse().unwrap();
        let expect = (Complex64::new(1.0, 0.0) + omega(1)) * 0.5;
        assert!(close(dense_oracle(&c, &p, &p).unwrap(), expect));

        let mut c = Circuit::new(2);
        c.push(Gate::CZ(0, 1));
        let p: StateSpec = "++".parse().unwrap();
        assert!(close(dense_oracle(&c, &p, &p).unwrap(), Complex64::new(0.5, 0.0)));
    }

    #[test]
    fn pauli_exp_is_unitary_rotation() {
        // e^{iθ}(cos θ I − i sin θ Y) with θ = π/8
        let mut c = Circuit::new(1);
        c.gates.push(Gate::PauliExp(vec![(0, Pauli::Y)], 1));
        let v = dense_state(&c).unwrap();
        let th = std::f64::consts::PI / 8.0;
        let ph = Complex64::from_polar(1.0, th);
        // cos θ |0⟩ − i sin θ · Y|0⟩ = cos θ |0⟩ + sin θ |1⟩
        assert!(close(v[0], ph * th.cos()));
        assert!(close(v[1], ph * th.sin()));
    }

    #[test]
    fn size_guard() {
        let c = Circuit::new(15);
        let s = StateSpec::uniform(15, Basis::Zero);
        assert_eq!(dense_oracle(&c, &s, &s), Err(DenseError::TooLarge(15)));
    }
}
