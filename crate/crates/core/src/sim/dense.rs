//! Full state vector in canonical qubit order, used as the verification oracle.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{Circuit, OpKind, Operator};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliTerm};

/// Largest qubit count the oracle operations accept.
pub const MAX_ORACLE_QUBITS: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceState {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::OracleTooLarge { n, max: MAX_ORACLE_QUBITS });
    }
    Ok(())
}

impl ReferenceState {
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(ReferenceState { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidShape(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let n = amps.len().trailing_zeros() as usize;
        check_size(n)?;
        Ok(ReferenceState { n, amps })
    }

    /// No size limit; the oracle operations still check it.
    pub(crate) fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        ReferenceState { n, amps }
    }

    /// Normalized complex Gaussian vector.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        ReferenceState { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &ReferenceState) -> f64 {
        assert_eq!(self.n, other.n, "states differ in size");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Each output amplitude is summed directly from the inputs that feed it.
    pub fn apply(&mut self, op: &Operator) -> Result<()> {
        check_size(self.n)?;
        match op.kind() {
            OpKind::Gate { payload } => {
                let u = payload.as_deref().ok_or(Error::MissingPayload(op.id()))?;
                let t = op.targets();
                let tmask = t.iter().fold(0usize, |m, &q| m | 1 << q);
                let spread = |c: usize| t.iter().enumerate().fold(0usize, |m, (b, &q)| m | (c >> b & 1) << q);
                let out = (0..self.amps.len())
                    .map(|i| {
                        let row = t.iter().enumerate().fold(0usize, |r, (b, &q)| r | (i >> q & 1) << b);
                        let base = i & !tmask;
                        (0..u.dim()).fold(Complex64::new(0.0, 0.0), |acc, c| acc + u.get(row, c) * self.amps[base | spread(c)])
                    })
                    .collect();
                self.amps = out;
            }
            OpKind::Pauli(s) => self.amps = self.pauli_image(s),
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        circuit.ops().iter().try_for_each(|op| self.apply(op))
    }

    /// `P |psi>` built letter by letter from the single-qubit matrices.
    fn pauli_image(&self, s: &PauliString) -> Vec<Complex64> {
        let mut v = self.amps.clone();
        for q in 0..self.n {
            let letter = s.letter(q);
            let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
            for (i, &a) in v.iter().enumerate() {
                let bit = i >> q & 1;
                use crate::pauli::Pauli::*;
                let (j, f) = match letter {
                    I => (i, Complex64::new(1.0, 0.0)),
                    X => (i ^ 1 << q, Complex64::new(1.0, 0.0)),
                    Y => (i ^ 1 << q, if bit == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) }),
                    Z => (i, if bit == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(-1.0, 0.0) }),
                };
                next[j] += f * a;
            }
            v = next;
        }
        v
    }

    /// `sum_i a_i <psi| P_i |psi>` in term order.
    pub fn expectation(&self, terms: &[PauliTerm]) -> Result<Complex64> {
        check_size(self.n)?;
        Ok(terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
            let img = self.pauli_image(&t.string);
            let inner = self.amps.iter().zip(&img).fold(Complex64::new(0.0, 0.0), |s, (a, b)| s + a.conj() * b);
            acc + t.coeff * inner
        }))
    }
}
