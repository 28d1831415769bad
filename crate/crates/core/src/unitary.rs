//! Dense gate payloads.
//!
//! Matrix index convention: bit `b` of a row/column index is the state of the
//! operator's `b`-th listed target qubit.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    arity: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    /// Row-major `2^arity x 2^arity` matrix. Panics on a size mismatch.
    pub fn new(arity: usize, data: Vec<Complex64>) -> Self {
        let dim = 1usize << arity;
        assert_eq!(data.len(), dim * dim, "payload size does not match arity {arity}");
        Unitary { arity, data }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Max entry deviation of `U^dagger U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Unitary::new(1, [h, h, h, -h].map(|x| Complex64::new(x, 0.0)).to_vec())
    }

    pub fn pauli_x() -> Self {
        Unitary::new(1, [0.0, 1.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0)).to_vec())
    }

    /// Control is the first listed target, the flipped qubit the second.
    pub fn cnot() -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); 16];
        // basis index = control | target << 1
        for (row, col) in [(0, 0), (2, 2), (3, 1), (1, 3)] {
            data[row * 4 + col] = Complex64::new(1.0, 0.0);
        }
        Unitary::new(2, data)
    }

    /// Haar-like random unitary: Gram-Schmidt over a complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(arity: usize, rng: &mut R) -> Self {
        let d = 1usize << arity;
        // columns
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        for j in 0..d {
            // two passes of modified Gram-Schmidt keep unitarity near 1e-15
            for _ in 0..2 {
                for k in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let proj: Complex64 = done[k].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                    for (x, e) in rest[0].iter_mut().zip(&done[k]) {
                        *x -= proj * e;
                    }
                }
            }
            let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                data[r * d + c] = v;
            }
        }
        Unitary::new(arity, data)
    }
}
