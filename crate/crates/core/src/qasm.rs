//! A small OpenQASM 2.0 subset.
//!
//! Accepted statements: the `OPENQASM` header, `include`, `qreg`, `barrier`,
//! and the gates `h x z s sdg t tdg cx cz ccz`, `rz(θ)` with θ a multiple of
//! π/4, and `pexp_<P>(θ)` where `<P>` is a Pauli string over `IXYZ` (one
//! operand per letter) and θ an odd multiple of π/4. `rz(θ)` is read as
//! `diag(1, e^{iθ})`. Several `qreg`s are laid out one after another.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, Pauli};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QasmErrorKind {
    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("qubit index {index} out of range for register `{reg}` of size {size}")]
    IndexOutOfRange { reg: String, index: usize, size: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

struct Stmt {
    text: String,
    line: usize,
    col: usize,
}

/// Splits on `;`, dropping `//` comments and recording where each statement starts.
fn statements(src: &str) -> (Vec<Stmt>, Option<Stmt>) {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start: Option<(usize, usize)> = None;
    for (li, line) in src.lines().enumerate() {
        let line = match line.find("//") {
            Some(i) => &line[..i],
            None => line,
        };
        for (ci, ch) in line.chars().enumerate() {
            if ch == ';' {
                let (l, c) = start.unwrap_or((li + 1, ci + 1));
                out.push(Stmt { text: std::mem::take(&mut cur), line: l, col: c });
                start = None;
            } else {
                if start.is_none() && !ch.is_whitespace() {
                    start = Some((li + 1, ci + 1));
                }
                if start.is_some() {
                    cur.push(ch);
                }
            }
        }
        if start.is_some() {
            cur.push(' ');
        }
    }
    let rest = start.map(|(line, col)| Stmt { text: cur, line, col });
    (out, rest)
}

/// Recursive-descent evaluator for angle expressions over numbers, `pi`,
/// `+ - * /` and parentheses.
struct Expr<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Expr<'a> {
    fn eval(src: &str) -> Result<f64, String> {
        let mut e = Expr { s: src.as_bytes(), i: 0 };
        let v = e.sum()?;
        e.ws();
        if e.i != e.s.len() {
            return Err(format!("unexpected `{}` in angle", &src[e.i..]));
        }
        Ok(v)
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let r = self.product()?;
            v = if c == b'+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.i += 1;
            let r = self.unary()?;
            v = if c == b'*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.i += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err("missing `)` in angle".into());
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let st = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_alphanumeric() {
                    self.i += 1;
                }
                match &self.s[st..self.i] {
                    b"pi" => Ok(std::f64::consts::PI),
                    w => Err(format!("unknown identifier `{}` in angle", String::from_utf8_lossy(w))),
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let st = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
                    self.i += 1;
                }
                // exponent part
                if self.i < self.s.len() && (self.s[self.i] == b'e' || self.s[self.i] == b'E') {
                    self.i += 1;
                    if self.i < self.s.len() && (self.s[self.i] == b'-' || self.s[self.i] == b'+') {
                        self.i += 1;
                    }
                    while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                        self.i += 1;
                    }
                }
                let t = std::str::from_utf8(&self.s[st..self.i]).unwrap();
                t.parse().map_err(|_| format!("bad number `{t}`"))
            }
            Some(c) => Err(format!("unexpected `{}` in angle", c as char)),
            None => Err("empty angle".into()),
        }
    }
}

/// Angle as an integer number of π/4 steps, reduced mod 8.
fn angle_eighths(expr: &str) -> Result<u8, String> {
    let v = Expr::eval(expr)?;
    let k = v / std::f64::consts::FRAC_PI_4;
    let r = k.round();
    if !v.is_finite() || (k - r).abs() > 1e-9 {
        return Err(format!("angle `{expr}` is not a multiple of pi/4"));
    }
    Ok((r as i64).rem_euclid(8) as u8)
}

struct Parser {
    regs: Vec<(String, usize, usize)>,
    qubits: usize,
}

impl Parser {
    fn operand(&self, s: &str) -> Result<usize, QasmErrorKind> {
        let s = s.trim();
        let open = s.find('[').ok_or_else(|| QasmErrorKind::Syntax(format!("expected `reg[i]`, found `{s}`")))?;
        if !s.ends_with(']') {
            return Err(QasmErrorKind::Syntax(format!("expected `reg[i]`, found `{s}`")));
        }
        let name = s[..open].trim();
        let index: usize = s[open + 1..s.len() - 1]
            .trim()
            .parse()
            .map_err(|_| QasmErrorKind::Syntax(format!("bad index in `{s}`")))?;
        let &(_, off, size) = self
            .regs
            .iter()
            .find(|r| r.0 == name)
            .ok_or_else(|| QasmErrorKind::Invalid(format!("unknown register `{name}`")))?;
        if index >= size {
            return Err(QasmErrorKind::IndexOutOfRange { reg: name.to_string(), index, size });
        }
        Ok(off + index)
    }

    fn statement(&mut self, text: &str, out: &mut Vec<Gate>) -> Result<(), QasmErrorKind> {
        let text = text.trim();
        let head_end = text.find(|c: char| c.is_whitespace() || c == '(').unwrap_or(text.len());
        let head = &text[..head_end];
        let mut rest = &text[head_end..];
        match head {
            "OPENQASM" | "include" | "barrier" => return Ok(()),
            "qreg" => {
                let r = rest.trim();
                let open = r.find('[').ok_or_else(|| QasmErrorKind::Syntax("expected `qreg name[n]`".into()))?;
                if !r.ends_with(']') {
                    return Err(QasmErrorKind::Syntax("expected `qreg name[n]`".into()));
                }
                let name = r[..open].trim().to_string();
                let n: usize = r[open + 1..r.len() - 1]
                    .trim()
                    .parse()
                    .map_err(|_| QasmErrorKind::Syntax("bad register size".into()))?;
                if self.regs.iter().any(|x| x.0 == name) {
                    return Err(QasmErrorKind::Invalid(format!("register `{name}` declared twice")));
                }
                self.regs.push((name, self.qubits, n));
                self.qubits += n;
                return Ok(());
            }
            _ => {}
        }
        let mut angle = None;
        if rest.starts_with('(') {
            let close = rest.find(')').ok_or_else(|| QasmErrorKind::Syntax("missing `)`".into()))?;
            angle = Some(&rest[1..close]);
            rest = &rest[close + 1..];
        }
        let ops = rest
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.operand(s))
            .collect::<Result<Vec<_>, _>>()?;

        let arity = |n: usize| {
            if ops.len() == n {
                Ok(())
            } else {
                Err(QasmErrorKind::Syntax(format!("`{head}` takes {n} operand(s), got {}", ops.len())))
            }
        };
        let no_angle = || {
            if angle.is_some() {
                Err(QasmErrorKind::Syntax(format!("`{head}` takes no parameter")))
            } else {
                Ok(())
            }
        };
        let g = match head {
            "h" | "x" | "z" | "s" | "sdg" | "t" | "tdg" => {
                no_angle()?;
                arity(1)?;
                let q = ops[0];
                match head {
                    "h" => Gate::H(q),
                    "x" => Gate::X(q),
                    "z" => Gate::Z(q),
                    "s" => Gate::S(q),
                    "sdg" => Gate::Sdg(q),
                    "t" => Gate::T(q),
                    _ => Gate::Tdg(q),
                }
            }
            "cx" | "CX" => {
                no_angle()?;
                arity(2)?;
                Gate::CX(ops[0], ops[1])
            }
            "cz" => {
                no_angle()?;
                arity(2)?;
                Gate::CZ(ops[0], ops[1])
            }
            "ccz" => {
                no_angle()?;
                arity(3)?;
                Gate::CCZ(ops[0], ops[1], ops[2])
            }
            "rz" => {
                arity(1)?;
                let a = angle.ok_or_else(|| QasmErrorKind::Syntax("`rz` needs an angle".into()))?;
                Gate::Rz(ops[0], angle_eighths(a).map_err(QasmErrorKind::Invalid)?)
            }
            _ if head.starts_with("pexp_") => {
                let letters = &head[5..];
                arity(letters.len())?;
                let a = angle.ok_or_else(|| QasmErrorKind::Syntax(format!("`{head}` needs an angle")))?;
                let k = angle_eighths(a).map_err(QasmErrorKind::Invalid)?;
                if k % 2 == 0 {
                    return Err(QasmErrorKind::Invalid(format!("`{head}` angle must be an odd multiple of pi/4")));
                }
                let mut ps = Vec::new();
                for (ch, &q) in letters.chars().zip(&ops) {
                    let p = match ch {
                        'I' => continue,
                        'X' => Pauli::X,
                        'Y' => Pauli::Y,
                        'Z' => Pauli::Z,
                        _ => return Err(QasmErrorKind::UnsupportedGate(head.to_string())),
                    };
                    ps.push((q, p));
                }
                if ps.is_empty() {
                    return Err(QasmErrorKind::Invalid(format!("`{head}` has no non-identity factor")));
                }
                Gate::PauliExp(ps, k)
            }
            _ => return Err(QasmErrorKind::UnsupportedGate(head.to_string())),
        };
        let qs = g.qubits();
        for (i, q) in qs.iter().enumerate() {
            if qs[..i].contains(q) {
                return Err(QasmErrorKind::Invalid(format!("`{head}` repeats qubit {q}")));
            }
        }
        out.push(g);
        Ok(())
    }
}

pub fn parse_qasm(src: &str) -> Result<Circuit, QasmError> {
    let (stmts, rest) = statements(src);
    if let Some(s) = rest {
        return Err(QasmError { line: s.line, col: s.col, kind: QasmErrorKind::Syntax("missing `;`".into()) });
    }
    let mut p = Parser { regs: Vec::new(), qubits: 0 };
    let mut gates = Vec::new();
    for s in stmts {
        if s.text.trim().is_empty() {
            continue;
        }
        p.statement(&s.text, &mut gates).map_err(|kind| QasmError { line: s.line, col: s.col, kind })?;
    }
    Ok(Circuit { qubits: p.qubits, gates })
}

fn angle_text(k: u8) -> String {
    match k {
        0 => "0".into(),
        1 => "pi/4".into(),
        _ => format!("{k}*pi/4"),
    }
}

/// Writes the circuit back in the accepted subset, with a single register `q`.
pub fn to_qasm(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];", c.qubits).unwrap();
    for g in &c.gates {
        let line = match g {
            Gate::H(q) => format!("h q[{q}];"),
            Gate::X(q) => format!("x q[{q}];"),
            Gate::Z(q) => format!("z q[{q}];"),
            Gate::S(q) => format!("s q[{q}];"),
            Gate::Sdg(q) => format!("sdg q[{q}];"),
            Gate::T(q) => format!("t q[{q}];"),
            Gate::Tdg(q) => format!("tdg q[{q}];"),
            Gate::Rz(q, k) => format!("rz({}) q[{q}];", angle_text(*k)),
            Gate::CX(a, b) => format!("cx q[{a}],q[{b}];"),
            Gate::CZ(a, b) => format!("cz q[{a}],q[{b}];"),
            Gate::CCZ(a, b, c) => format!("ccz q[{a}],q[{b}],q[{c}];"),
            Gate::PauliExp(ps, k) => {
                let letters: String = ps.iter().map(|p| p.1.letter()).collect();
                let ops: Vec<String> = ps.iter().map(|p| format!("q[{}]", p.0)).collect();
                format!("pexp_{letters}({}) {};", angle_text(*k), ops.join(","))
            }
        };
        s.push_str(&line);
        s.push('\n');
    }
    s
}
