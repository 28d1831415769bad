//! Text formats.
//!
//! Circuits: one operator per line, `G <id> <q>...` or `P <id> <letter><q>...`;
//! an optional `Q <n>` line fixes the qubit count, otherwise it is one more
//! than the largest qubit mentioned. `#` starts a comment.
//!
//! Hamiltonians: one term per line, `<re> <im> <letter><q>...`; no letters
//! means the identity.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, OpKind, Operator};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliTerm};
use crate::qubits::MAX_QUBITS;

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_letter(tok: &str, line: usize) -> Result<(Pauli, usize)> {
    let mut chars = tok.chars();
    let p = chars
        .next()
        .and_then(Pauli::from_char)
        .filter(|&p| p != Pauli::I)
        .ok_or_else(|| parse_err(line, format!("expected X, Y or Z followed by a qubit, got `{tok}`")))?;
    let q = chars.as_str().parse().map_err(|_| parse_err(line, format!("bad qubit index in `{tok}`")))?;
    Ok((p, q))
}

fn check_qubit(q: usize, n: usize, line: usize) -> Result<()> {
    if q >= n {
        return Err(Error::Index { line, qubit: q, n });
    }
    Ok(())
}

fn build_string(n: usize, letters: &[(Pauli, usize)], line: usize) -> Result<PauliString> {
    let mut s = PauliString::identity(n);
    for &(p, q) in letters {
        check_qubit(q, n, line)?;
        if s.letter(q) != Pauli::I {
            return Err(parse_err(line, format!("qubit {q} appears twice")));
        }
        s.set(q, p);
    }
    Ok(s)
}

enum Parsed {
    Gate(usize, Vec<usize>),
    Pauli(usize, Vec<(Pauli, usize)>),
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared: Option<usize> = None;
    let mut rows: Vec<(usize, Parsed)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = content(raw).split_whitespace();
        let Some(head) = toks.next() else { continue };
        let num = |t: &str| t.parse::<usize>().map_err(|_| parse_err(line, format!("expected an integer, got `{t}`")));
        match head {
            "Q" => {
                let n = num(toks.next().ok_or_else(|| parse_err(line, "Q needs a qubit count"))?)?;
                if declared.is_some() || !rows.is_empty() {
                    return Err(parse_err(line, "Q must come once, before any operator"));
                }
                if n == 0 || n > MAX_QUBITS {
                    return Err(parse_err(line, format!("qubit count {n} outside 1..={MAX_QUBITS}")));
                }
                declared = Some(n);
            }
            "G" | "P" => {
                let id = num(toks.next().ok_or_else(|| parse_err(line, "missing operator id"))?)?;
                let row = if head == "G" {
                    let qs = toks.map(num).collect::<Result<Vec<_>>>()?;
                    if qs.is_empty() {
                        return Err(parse_err(line, "gate without targets"));
                    }
                    Parsed::Gate(id, qs)
                } else {
                    Parsed::Pauli(id, toks.map(|t| parse_letter(t, line)).collect::<Result<Vec<_>>>()?)
                };
                rows.push((line, row));
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }
    let largest = rows
        .iter()
        .flat_map(|(_, r)| match r {
            Parsed::Gate(_, qs) => qs.clone(),
            Parsed::Pauli(_, ls) => ls.iter().map(|&(_, q)| q).collect(),
        })
        .max();
    let n = match declared {
        Some(n) => n,
        None => largest.map_or(1, |q| q + 1),
    };
    let mut ops = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        ops.push(match row {
            Parsed::Gate(id, qs) => {
                for &q in &qs {
                    check_qubit(q, n, line)?;
                }
                Operator::gate(id, &qs)
            }
            Parsed::Pauli(id, ls) => Operator::pauli(id, build_string(n, &ls, line)?),
        });
    }
    Circuit::new(n, ops)
}

fn sparse_letters(s: &PauliString) -> String {
    let mut out = String::new();
    for q in s.targets() {
        let _ = write!(out, " {}{}", s.letter(q).as_char(), q);
    }
    out
}

/// Payloads are not part of the text form.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("Q {}\n", c.n());
    for op in c.ops() {
        match op.kind() {
            OpKind::Gate { .. } => {
                let _ = write!(out, "G {}", op.id());
                for q in op.targets() {
                    let _ = write!(out, " {q}");
                }
            }
            OpKind::Pauli(s) => {
                let _ = write!(out, "P {}{}", op.id(), sparse_letters(s));
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a Hamiltonian over `n` qubits, or over one more than the largest
/// qubit mentioned when `n` is `None`.
pub fn parse_hamiltonian(text: &str, n: Option<usize>) -> Result<Vec<PauliTerm>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = content(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() < 2 {
            return Err(parse_err(line, "expected `<re> <im>` before the letters"));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|_| parse_err(line, format!("bad coefficient `{t}`")));
        let coeff = Complex64::new(num(toks[0])?, num(toks[1])?);
        let letters = toks[2..].iter().map(|t| parse_letter(t, line)).collect::<Result<Vec<_>>>()?;
        rows.push((line, coeff, letters));
    }
    let n = match n {
        Some(n) => n,
        None => rows.iter().flat_map(|(_, _, ls)| ls.iter().map(|&(_, q)| q + 1)).max().unwrap_or(1),
    };
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidShape(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    rows.into_iter().map(|(line, coeff, ls)| Ok(PauliTerm::new(coeff, build_string(n, &ls, line)?))).collect()
}

/// Coefficients use the shortest text that parses back to the same double.
pub fn serialize_hamiltonian(terms: &[PauliTerm]) -> String {
    let mut out = String::new();
    for t in terms {
        let _ = writeln!(out, "{:?} {:?}{}", t.coeff.re, t.coeff.im, sparse_letters(&t.string));
    }
    out
}
