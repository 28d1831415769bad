use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubits::{QubitSet, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli string in symplectic form: qubit `q` carries X when only
/// the x bit is set, Z when only the z bit is set, Y when both are.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        PauliString { n, x: 0, z: 0 }
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    /// Sparse construction, e.g. `[(X, 2), (Z, 6), (X, 7)]`.
    pub fn from_sparse(n: usize, letters: &[(Pauli, usize)]) -> Result<Self> {
        let mut s = PauliString::identity(n);
        for &(p, q) in letters {
            if q >= n {
                return Err(Error::Index { line: 0, qubit: q, n });
            }
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n);
        let bit = 1u64 << q;
        self.x &= !bit;
        self.z &= !bit;
        match p {
            Pauli::I => {}
            Pauli::X => self.x |= bit,
            Pauli::Z => self.z |= bit,
            Pauli::Y => {
                self.x |= bit;
                self.z |= bit;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self, q: usize) -> Pauli {
        match (self.x >> q & 1, self.z >> q & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (0, 1) => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Positions of non-identity letters.
    pub fn targets(&self) -> QubitSet {
        QubitSet::from_bits(self.x | self.z)
    }

    /// Qubits that must be local to evaluate the string without a reordering.
    /// Z letters may stay global when diagonalizing, since they only
    /// contribute a per-PE sign.
    pub fn effective_targets(&self, diagonalize: bool) -> QubitSet {
        if diagonalize {
            QubitSet::from_bits(self.x)
        } else {
            self.targets()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in self.targets() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", self.letter(q).as_char(), q)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().iter().map(|p| p.as_char()).collect();
        write!(f, "PauliString({s})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, string: PauliString) -> Self {
        PauliTerm { coeff, string }
    }
}
