//! Emulation of `p` processing elements that each hold one block of the state
//! vector.
//!
//! An amplitude of basis state `i` (bit `q` = qubit `q`) lives at the position
//! index whose bit `pos(q)` equals bit `q` of `i`; the top `n_G` bits of that
//! index select the PE and the low `n_L` bits the offset inside it.
//!
//! Worker threads own whole sub-vectors between QR barriers. Reductions run
//! over PEs in ascending order, so results do not depend on the worker count.

mod dense;
mod dump;

pub use dense::{ReferenceState, MAX_ORACLE_QUBITS};
pub use dump::{read_dump, write_dump};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, OpKind, Operator};
use crate::error::{Error, Result};
use crate::evc::PauliTilePlan;
use crate::layout::{ClusterShape, QrClass, QrEvent, QubitLayout};
use crate::pauli::{PauliString, PauliTerm};
use crate::schedule::Schedule;
use crate::unitary::Unitary;

/// One executed reordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QrRecord {
    pub class: QrClass,
    pub rank: usize,
    /// Amplitudes whose owning PE changed, counted during the exchange.
    pub relocated: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributedState {
    shape: ClusterShape,
    layout: QubitLayout,
    pes: Vec<Vec<Complex64>>,
    log: Vec<QrRecord>,
}

/// Qubit bit mask translated into position bits under `layout`.
fn position_mask(layout: &QubitLayout, qubits: u64) -> usize {
    (0..layout.n()).filter(|&q| qubits >> q & 1 == 1).fold(0, |m, q| m | 1 << layout.position(q))
}

/// Bit permutation `out bit d = in bit src[d]`, evaluated a byte at a time.
struct BitPermutation {
    tables: Vec<[usize; 256]>,
}

impl BitPermutation {
    fn new(src: &[usize]) -> Self {
        let tables = (0..src.len().div_ceil(8))
            .map(|chunk| {
                let mut t = [0usize; 256];
                for (byte, slot) in t.iter_mut().enumerate() {
                    for b in 0..8 {
                        let d = chunk * 8 + b;
                        if d < src.len() && byte >> b & 1 == 1 {
                            *slot |= 1 << src[d];
                        }
                    }
                }
                t
            })
            .collect();
        BitPermutation { tables }
    }

    fn apply(&self, x: usize) -> usize {
        self.tables.iter().enumerate().fold(0, |acc, (c, t)| acc | t[x >> (8 * c) & 0xff])
    }
}

/// Applies `u` to every amplitude group addressed by `positions` in one block.
fn apply_local(v: &mut [Complex64], positions: &[usize], u: &Unitary) {
    let dim = u.dim();
    let offsets: Vec<usize> =
        (0..dim).map(|c| positions.iter().enumerate().fold(0, |m, (b, &p)| m | (c >> b & 1) << p)).collect();
    let mask = offsets[dim - 1];
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    for base in (0..v.len()).filter(|b| b & mask == 0) {
        for (c, slot) in buf.iter_mut().enumerate() {
            *slot = v[base | offsets[c]];
        }
        for r in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, &a) in buf.iter().enumerate() {
                acc += u.get(r, c) * a;
            }
            v[base | offsets[r]] = acc;
        }
    }
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `<v| P |v>` for a Pauli acting on offset bits `x`, `z` of one block.
fn local_pauli_sum(v: &[Complex64], x: usize, z: usize, y_count: u32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (off, &a) in v.iter().enumerate() {
        let t = v[off ^ x].conj() * a;
        if (off & z).count_ones().is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc * i_pow(y_count)
}

/// Outcome of [`DistributedState::expectation`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationReport {
    pub value: Complex64,
    pub tiles: usize,
    /// Reorderings between tiles.
    pub qr_count: usize,
    /// Whether a reordering was needed before the first tile.
    pub lead_in: bool,
}

impl DistributedState {
    /// `|0...0>` under the identity layout.
    pub fn zero(n: usize, shape: ClusterShape) -> Result<Self> {
        let layout = QubitLayout::identity(n, shape)?;
        let block = 1usize << layout.n_local();
        let mut pes = vec![vec![Complex64::new(0.0, 0.0); block]; shape.p()];
        pes[0][0] = Complex64::new(1.0, 0.0);
        Ok(DistributedState { shape, layout, pes, log: Vec::new() })
    }

    /// Distributes a canonical-order vector under the identity layout.
    pub fn from_amplitudes(amps: &[Complex64], shape: ClusterShape) -> Result<Self> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::InvalidShape(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let n = amps.len().trailing_zeros() as usize;
        let layout = QubitLayout::identity(n, shape)?;
        let pes = amps.chunks(1 << layout.n_local()).map(<[Complex64]>::to_vec).collect();
        Ok(DistributedState { shape, layout, pes, log: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn shape(&self) -> ClusterShape {
        self.shape
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn sub_vector(&self, pe: usize) -> &[Complex64] {
        &self.pes[pe]
    }

    /// Every reordering executed on this state so far.
    pub fn qr_log(&self) -> &[QrRecord] {
        &self.log
    }

    pub fn norm(&self) -> f64 {
        self.pes.iter().map(|v| v.iter().map(Complex64::norm_sqr).sum::<f64>()).sum::<f64>().sqrt()
    }

    fn local_positions(&self, op: &Operator) -> Result<Vec<usize>> {
        let n_local = self.layout.n_local();
        op.targets()
            .iter()
            .map(|&q| self.layout.position(q))
            .map(|p| if p < n_local { Ok(p) } else { Err(Error::AccessViolation(op.id())) })
            .collect()
    }

    /// Applies an operator whose targets are all local. Pauli operators act
    /// as their own unitary.
    pub fn apply_gate_narrow(&mut self, op: &Operator) -> Result<()> {
        let positions = self.local_positions(op)?;
        match op.kind() {
            OpKind::Gate { payload } => {
                let u = payload.as_deref().ok_or(Error::MissingPayload(op.id()))?;
                self.pes.par_iter_mut().for_each(|v| apply_local(v, &positions, u));
            }
            OpKind::Pauli(s) => {
                let x = position_mask(&self.layout, s.x_mask());
                let z = position_mask(&self.layout, s.z_mask());
                let phase = i_pow(s.y_count());
                self.pes.par_iter_mut().for_each(|v| {
                    let src = v.clone();
                    for (off, &a) in src.iter().enumerate() {
                        let sign = if (off & z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                        v[off ^ x] = a * phase * sign;
                    }
                });
            }
        }
        Ok(())
    }

    /// Moves every amplitude to where `event.after` places it.
    pub fn perform_qr(&mut self, event: &QrEvent) -> Result<()> {
        if event.before() != &self.layout {
            return Err(Error::LayoutMismatch);
        }
        let after = event.after();
        let src: Vec<usize> = (0..self.n()).map(|d| self.layout.position(after.qubit_at(d))).collect();
        let perm = BitPermutation::new(&src);
        let n_local = self.layout.n_local();
        let low = (1usize << n_local) - 1;
        let old = &self.pes;
        let moved: Vec<(Vec<Complex64>, u128)> = (0..old.len())
            .into_par_iter()
            .map(|pe| {
                let mut relocated = 0u128;
                let block = (0..=low)
                    .map(|off| {
                        let s = perm.apply(pe << n_local | off);
                        if s >> n_local != pe {
                            relocated += 1;
                        }
                        old[s >> n_local][s & low]
                    })
                    .collect();
                (block, relocated)
            })
            .collect();
        let mut relocated = 0;
        self.pes = moved
            .into_iter()
            .map(|(b, r)| {
                relocated += r;
                b
            })
            .collect();
        self.layout = after.clone();
        self.log.push(QrRecord { class: event.class(), rank: event.exchange_rank(), relocated });
        Ok(())
    }

    /// Executes a schedule: each tile's reordering, then its operators.
    pub fn run_qsu(&mut self, circuit: &Circuit, schedule: &Schedule) -> Result<()> {
        if schedule.initial_layout() != &self.layout {
            return Err(Error::LayoutMismatch);
        }
        for (event, tile) in schedule.steps() {
            if let Some(e) = event {
                self.perform_qr(e)?;
            }
            for &g in &tile.gates {
                self.apply_gate_narrow(circuit.op(g))?;
            }
        }
        Ok(())
    }

    /// Canonical-order copy of the amplitudes.
    pub fn flatten(&self) -> ReferenceState {
        let n = self.n();
        // canonical bit q comes from position bit pos(q)
        let src: Vec<usize> = (0..n).map(|q| self.layout.position(q)).collect();
        let perm = BitPermutation::new(&src);
        let n_local = self.layout.n_local();
        let low = (1usize << n_local) - 1;
        let amps = (0..1usize << n)
            .map(|i| {
                let j = perm.apply(i);
                self.pes[j >> n_local][j & low]
            })
            .collect();
        ReferenceState::from_raw(n, amps)
    }

    /// Per-PE `<psi_j| P |psi_j>`, with the PE sign applied for global Z
    /// letters. `None` when an X or Y letter sits on a global qubit.
    fn pauli_partials(&self, s: &PauliString) -> Option<Vec<Complex64>> {
        let n_local = self.layout.n_local();
        let low = (1usize << n_local) - 1;
        let x = position_mask(&self.layout, s.x_mask());
        if x & !low != 0 {
            return None;
        }
        let z = position_mask(&self.layout, s.z_mask());
        let z_global = z >> n_local;
        let y = s.y_count();
        Some(
            self.pes
                .par_iter()
                .enumerate()
                .map(|(pe, v)| {
                    let part = local_pauli_sum(v, x, z & low, y);
                    if (pe & z_global).count_ones().is_multiple_of(2) {
                        part
                    } else {
                        -part
                    }
                })
                .collect(),
        )
    }

    /// `<psi| P |psi>` for a string whose global letters are all I or Z,
    /// without moving any data.
    pub fn diag_expectation_term(&self, s: &PauliString) -> Result<f64> {
        let parts = self.pauli_partials(s).ok_or(Error::NotDiagonalizable)?;
        Ok(parts.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b).re)
    }

    /// Reorders to each tile's local set in turn and sums the tile's terms.
    /// Without diagonalization every letter of a term must be local; with it
    /// only the X and Y letters must be.
    pub fn expectation(&mut self, plan: &PauliTilePlan, terms: &[PauliTerm]) -> Result<ExpectationReport> {
        let n_local = self.layout.n_local();
        let low = (1usize << n_local) - 1;
        let mut total = Complex64::new(0.0, 0.0);
        let mut qr_count = 0;
        let mut lead_in = false;
        for (t, tile) in plan.tiles.iter().enumerate() {
            if tile.local_qubits != self.layout.local_set() {
                let e = QrEvent::transition(&self.layout, tile.local_qubits, None)?;
                self.perform_qr(&e)?;
                if t == 0 {
                    lead_in = true;
                } else {
                    qr_count += 1;
                }
            }
            let mut tile_parts = vec![Complex64::new(0.0, 0.0); self.pes.len()];
            for &id in &tile.terms {
                let s = &terms[id].string;
                if !plan.diagonalize && position_mask(&self.layout, s.z_mask()) & !low != 0 {
                    return Err(Error::AccessViolation(id));
                }
                let parts = self.pauli_partials(s).ok_or(Error::AccessViolation(id))?;
                for (acc, p) in tile_parts.iter_mut().zip(parts) {
                    *acc += terms[id].coeff * p;
                }
            }
            total += tile_parts.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + b);
        }
        Ok(ExpectationReport { value: total, tiles: plan.tiles.len(), qr_count, lead_in })
    }
}

/// Runs the circuit from `|0...0>` and measures the Hamiltonian: one energy
/// evaluation without any parameter update.
pub fn evaluate_energy(
    circuit: &Circuit,
    schedule: &Schedule,
    terms: &[PauliTerm],
    plan: &PauliTilePlan,
    shape: ClusterShape,
) -> Result<f64> {
    let mut state = DistributedState::zero(circuit.n(), shape)?;
    state.run_qsu(circuit, schedule)?;
    Ok(state.expectation(plan, terms)?.value.re)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
