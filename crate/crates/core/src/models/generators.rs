//! Circuit and Hamiltonian generators. Every generator is a pure function of
//! its arguments.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Operator};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliTerm};
use crate::unitary::Unitary;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateFabricSpec {
    pub n: usize,
    pub layers: usize,
    pub seed: u64,
}

/// Lowest qubit of every block, in circuit order.
fn gatefabric_blocks(n: usize, layers: usize) -> Result<Vec<usize>> {
    if n < 4 {
        return Err(Error::CircuitTooSmall(n));
    }
    let a = (0..n / 4).map(|k| 4 * k);
    let b = (0..(n - 2) / 4).map(|k| 4 * k + 2);
    let layer: Vec<usize> = a.chain(b).collect();
    Ok((0..layers).flat_map(|_| layer.iter().copied()).collect())
}

/// Blocks per layer: `floor(n/4) + floor((n-2)/4)`.
pub fn gatefabric_block_count(n: usize, layers: usize) -> usize {
    if n < 4 {
        return 0;
    }
    (n / 4 + (n - 2) / 4) * layers
}

/// GateFabric-shaped circuit: per layer, blocks on `{4k..4k+3}` then on
/// `{4k+2..4k+5}`, each group ordered by lowest qubit. Payloads are seeded
/// random 4-qubit unitaries.
pub fn gen_gatefabric(spec: &GateFabricSpec) -> Result<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ops = gatefabric_blocks(spec.n, spec.layers)?
        .into_iter()
        .enumerate()
        .map(|(id, lo)| Operator::gate_with(id, &[lo, lo + 1, lo + 2, lo + 3], Unitary::random(4, &mut rng)))
        .collect();
    Circuit::new(spec.n, ops)
}

/// The same block geometry without payloads, for scheduling only.
pub fn gatefabric_targets(n: usize, layers: usize) -> Result<Circuit> {
    let ops = gatefabric_blocks(n, layers)?
        .into_iter()
        .enumerate()
        .map(|(id, lo)| Operator::gate(id, &[lo, lo + 1, lo + 2, lo + 3]))
        .collect();
    Circuit::new(n, ops)
}

/// `m` gates of arity `1..=max_arity` on uniformly drawn distinct qubits,
/// with random unitary payloads when `payloads` is set.
pub fn gen_random_circuit(n: usize, m: usize, max_arity: usize, seed: u64, payloads: bool) -> Result<Circuit> {
    let max_arity = max_arity.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = (0..m)
        .map(|id| {
            let k = rng.random_range(1..=max_arity);
            let targets = sample(&mut rng, n, k).into_vec();
            if payloads {
                let u = Unitary::random(k, &mut rng);
                Operator::gate_with(id, &targets, u)
            } else {
                Operator::gate(id, &targets)
            }
        })
        .collect();
    Circuit::new(n, ops)
}

/// Number of terms [`gen_synthetic_jw`] emits:
/// `1 + n + 3*C(n,2) + 8*C(n,4)`.
pub fn synthetic_jw_term_count(n: usize) -> usize {
    let c2 = n * n.saturating_sub(1) / 2;
    let c4 = if n < 4 { 0 } else { n * (n - 1) * (n - 2) * (n - 3) / 24 };
    1 + n + 3 * c2 + 8 * c4
}

const QUARTIC: [[Pauli; 4]; 8] = {
    use Pauli::{X, Y};
    [[X, X, X, X], [X, X, Y, Y], [X, Y, X, Y], [X, Y, Y, X], [Y, X, X, Y], [Y, X, Y, X], [Y, Y, X, X], [Y, Y, Y, Y]]
};

/// Jordan-Wigner shaped Hamiltonian on `n` spin-orbitals: the identity, `Z_i`,
/// `Z_i Z_j`, hopping `X_i Z..Z X_j` and `Y_i Z..Z Y_j`, and for every
/// `i<j<k<l` the eight even-Y patterns with Z chains inside `(i,j)` and
/// `(k,l)`. Coefficients are seeded uniform reals in `[-1, 1)`.
pub fn gen_synthetic_jw(n: usize, seed: u64) -> Vec<PauliTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strings = vec![PauliString::identity(n)];
    let chain = |s: &mut PauliString, a: usize, b: usize| (a + 1..b).for_each(|q| s.set(q, Pauli::Z));
    for i in 0..n {
        let mut s = PauliString::identity(n);
        s.set(i, Pauli::Z);
        strings.push(s);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut zz = PauliString::identity(n);
            zz.set(i, Pauli::Z);
            zz.set(j, Pauli::Z);
            strings.push(zz);
            for p in [Pauli::X, Pauli::Y] {
                let mut s = PauliString::identity(n);
                s.set(i, p);
                s.set(j, p);
                chain(&mut s, i, j);
                strings.push(s);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    for pat in QUARTIC {
                        let mut s = PauliString::identity(n);
                        for (q, p) in [i, j, k, l].into_iter().zip(pat) {
                            s.set(q, p);
                        }
                        chain(&mut s, i, j);
                        chain(&mut s, k, l);
                        strings.push(s);
                    }
                }
            }
        }
    }
    strings
        .into_iter()
        .map(|s| PauliTerm::new(Complex64::new(rng.random_range(-1.0..1.0), 0.0), s))
        .collect()
}

/// Random term set: each term gets up to `max_letters` random letters.
pub fn gen_random_terms(n: usize, m: usize, max_letters: usize, seed: u64) -> Vec<PauliTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let k = rng.random_range(1..=max_letters.clamp(1, n));
            let letters: Vec<(Pauli, usize)> = sample(&mut rng, n, k)
                .into_iter()
                .map(|q| ([Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)], q))
                .collect();
            let s = PauliString::from_sparse(n, &letters).expect("qubits drawn below n");
            PauliTerm::new(Complex64::new(rng.random_range(-1.0..1.0), 0.0), s)
        })
        .collect()
}
