//! Qubit layouts over a two-layer cluster, access classification, qubit
//! reordering (QR) events and the QR cost model.
//!
//! Bit positions `[0, n_L)` of a basis index are the offset inside a PE,
//! `[n_L, n_L + log2 gpn)` select the PE inside a node (intra) and the rest
//! select the node (inter).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubits::{QubitSet, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClusterShape {
    nodes: usize,
    gpn: usize,
}

impl ClusterShape {
    pub fn new(nodes: usize, gpn: usize) -> Result<Self> {
        if !nodes.is_power_of_two() || !gpn.is_power_of_two() {
            return Err(Error::InvalidShape(format!("nodes={nodes} and gpn={gpn} must be powers of two")));
        }
        Ok(ClusterShape { nodes, gpn })
    }

    /// `p` PEs behind a flat network: every global qubit counts as inter.
    pub fn flat(p: usize) -> Result<Self> {
        ClusterShape::new(p, 1)
    }

    /// All `p` PEs inside one node.
    pub fn single_node(p: usize) -> Result<Self> {
        ClusterShape::new(1, p)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn gpn(&self) -> usize {
        self.gpn
    }

    pub fn p(&self) -> usize {
        self.nodes * self.gpn
    }

    pub fn n_global(&self) -> usize {
        self.p().trailing_zeros() as usize
    }

    pub fn n_intra(&self) -> usize {
        self.gpn.trailing_zeros() as usize
    }

    pub fn n_inter(&self) -> usize {
        self.nodes.trailing_zeros() as usize
    }

    /// Number of local qubits for an `n`-qubit state, checking `n_G <= n - 1`.
    pub fn n_local(&self, n: usize) -> Result<usize> {
        if n == 0 || self.n_global() > n - 1 {
            return Err(Error::TooManyPEs { n, p: self.p() });
        }
        Ok(n - self.n_global())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Access {
    Narrow,
    Wide,
}

pub fn classify_access(targets: QubitSet, layout: &QubitLayout) -> Access {
    if targets.is_subset(layout.local_set()) {
        Access::Narrow
    } else {
        Access::Wide
    }
}

/// Bijection between qubits and bit positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitLayout {
    n_local: usize,
    n_intra: usize,
    pos_of: Vec<u8>,
    qubit_at: Vec<u8>,
}

impl QubitLayout {
    /// Qubit `q` at position `q`.
    pub fn identity(n: usize, shape: ClusterShape) -> Result<Self> {
        let n_local = shape.n_local(n)?;
        if n > MAX_QUBITS {
            return Err(Error::InvalidShape(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let ident: Vec<u8> = (0..n as u8).collect();
        Ok(QubitLayout { n_local, n_intra: shape.n_intra(), pos_of: ident.clone(), qubit_at: ident })
    }

    /// Layout from a qubit -> position table.
    pub fn from_positions(positions: &[usize], shape: ClusterShape) -> Result<Self> {
        let n = positions.len();
        let mut layout = QubitLayout::identity(n, shape)?;
        let mut seen = vec![false; n];
        for (q, &pos) in positions.iter().enumerate() {
            if pos >= n || seen[pos] {
                return Err(Error::InvalidShape("positions are not a permutation".into()));
            }
            seen[pos] = true;
            layout.pos_of[q] = pos as u8;
            layout.qubit_at[pos] = q as u8;
        }
        Ok(layout)
    }

    pub fn n(&self) -> usize {
        self.pos_of.len()
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn n_global(&self) -> usize {
        self.n() - self.n_local
    }

    /// First inter position.
    pub fn inter_start(&self) -> usize {
        self.n_local + self.n_intra
    }

    pub fn position(&self, q: usize) -> usize {
        self.pos_of[q] as usize
    }

    pub fn qubit_at(&self, pos: usize) -> usize {
        self.qubit_at[pos] as usize
    }

    pub fn positions(&self) -> Vec<usize> {
        self.pos_of.iter().map(|&p| p as usize).collect()
    }

    fn qubits_in(&self, lo: usize, hi: usize) -> QubitSet {
        self.qubit_at[lo..hi].iter().map(|&q| q as usize).collect()
    }

    pub fn local_set(&self) -> QubitSet {
        self.qubits_in(0, self.n_local)
    }

    pub fn global_set(&self) -> QubitSet {
        self.qubits_in(self.n_local, self.n())
    }

    pub fn intra_set(&self) -> QubitSet {
        self.qubits_in(self.n_local, self.inter_start())
    }

    pub fn inter_set(&self) -> QubitSet {
        self.qubits_in(self.inter_start(), self.n())
    }

    /// Exchanges the positions of two qubits.
    pub fn swap_qubits(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.pos_of[a], self.pos_of[b]);
        self.pos_of.swap(a, b);
        self.qubit_at[pa as usize] = b as u8;
        self.qubit_at[pb as usize] = a as u8;
    }

    /// Swaps that move `local` into the local region and, when given, `intra`
    /// into the intra region. Departing and arriving qubits are paired in
    /// ascending order; an arriving qubit takes the exact position of the one
    /// it replaces, and every other qubit keeps its position.
    pub fn transition_swaps(&self, local: QubitSet, intra: Option<QubitSet>) -> Vec<(usize, usize)> {
        assert_eq!(local.len(), self.n_local, "local set must hold n_L qubits");
        let mut cur = self.clone();
        let mut swaps = Vec::new();
        let leaving = cur.local_set().difference(local);
        let arriving = local.difference(cur.local_set());
        for (a, b) in leaving.iter().zip(arriving.iter()) {
            cur.swap_qubits(a, b);
            swaps.push((a, b));
        }
        if let Some(intra) = intra {
            assert!(intra.intersection(local).is_empty(), "intra and local sets overlap");
            assert_eq!(intra.len(), self.n_intra, "intra set must hold log2(gpn) qubits");
            let leaving = cur.intra_set().difference(intra);
            let arriving = intra.difference(cur.intra_set());
            for (a, b) in leaving.iter().zip(arriving.iter()) {
                cur.swap_qubits(a, b);
                swaps.push((a, b));
            }
        }
        swaps
    }

    pub fn with_swaps(&self, swaps: &[(usize, usize)]) -> QubitLayout {
        let mut out = self.clone();
        for &(a, b) in swaps {
            out.swap_qubits(a, b);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QrClass {
    Intra,
    Inter,
}

/// A qubit reordering: a sequence of qubit position exchanges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QrEvent {
    swaps: Vec<(usize, usize)>,
    before: QubitLayout,
    after: QubitLayout,
    class: QrClass,
}

impl QrEvent {
    pub fn new(before: QubitLayout, swaps: Vec<(usize, usize)>) -> Result<Self> {
        let after = before.with_swaps(&swaps);
        let class = classify_layout_change(&before, &after)?;
        if swaps.is_empty() {
            return Err(Error::DegenerateQr);
        }
        Ok(QrEvent { swaps, before, after, class })
    }

    /// Event moving `before` onto the given local (and optionally intra) set.
    pub fn transition(before: &QubitLayout, local: QubitSet, intra: Option<QubitSet>) -> Result<Self> {
        let swaps = before.transition_swaps(local, intra);
        QrEvent::new(before.clone(), swaps)
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    pub fn before(&self) -> &QubitLayout {
        &self.before
    }

    pub fn after(&self) -> &QubitLayout {
        &self.after
    }

    pub fn class(&self) -> QrClass {
        self.class
    }

    /// Number of independent index bits that change PE ownership; for a
    /// plain exchange of k local qubits with k global ones this is k.
    pub fn exchange_rank(&self) -> usize {
        let n = self.before.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut rank = 0;
        for j in self.before.n_local()..n {
            // new bit j is old bit src
            let src = self.before.position(self.after.qubit_at(j));
            let (a, b) = (find(&mut parent, j), find(&mut parent, src));
            if a != b {
                parent[a] = b;
                rank += 1;
            }
        }
        rank
    }
}

fn classify_layout_change(before: &QubitLayout, after: &QubitLayout) -> Result<QrClass> {
    let changed = |lo: usize, hi: usize| (lo..hi).any(|j| before.qubit_at(j) != after.qubit_at(j));
    if changed(before.inter_start(), before.n()) {
        Ok(QrClass::Inter)
    } else if changed(before.n_local(), before.inter_start()) {
        Ok(QrClass::Intra)
    } else {
        Err(Error::DegenerateQr)
    }
}

/// Inter when any inter position changes occupant, intra when only intra
/// positions do.
pub fn classify_qr(before: &QubitLayout, swaps: &[(usize, usize)]) -> Result<QrClass> {
    if swaps.is_empty() {
        return Err(Error::DegenerateQr);
    }
    classify_layout_change(before, &before.with_swaps(swaps))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub intra: f64,
    pub inter: f64,
}

impl CostWeights {
    pub fn new(intra: f64, inter: f64) -> Result<Self> {
        if !(intra >= 0.0 && inter >= intra) {
            return Err(Error::Config(format!("weights need 0 <= intra <= inter, got ({intra}, {inter})")));
        }
        Ok(CostWeights { intra, inter })
    }
}

impl Default for CostWeights {
    /// Intra-node links are 24x faster than inter-node ones on the reference cluster.
    fn default() -> Self {
        CostWeights { intra: 1.0, inter: 24.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrCounts {
    pub total: usize,
    pub intra: usize,
    pub inter: usize,
}

impl QrCounts {
    pub fn from_events<'a>(events: impl IntoIterator<Item = &'a QrEvent>) -> Self {
        let mut c = QrCounts::default();
        for e in events {
            c.total += 1;
            match e.class() {
                QrClass::Intra => c.intra += 1,
                QrClass::Inter => c.inter += 1,
            }
        }
        c
    }

    pub fn cost(&self, w: CostWeights) -> f64 {
        w.intra * self.intra as f64 + w.inter * self.inter as f64
    }
}

/// Number of mapping changes along an execution, starting from `{0, .., n_L-1}`.
pub fn count_mapping_changes(n_local: usize, mappings: impl IntoIterator<Item = QubitSet>) -> usize {
    let mut prev = QubitSet::range(n_local);
    let mut count = 0;
    for m in mappings {
        if m != prev {
            count += 1;
        }
        prev = m;
    }
    count
}

/// Amplitudes that change PE in one reordering of `k` qubit pairs:
/// `(1 - 2^-k) * 2^n`.
pub fn qr_data_volume(k: usize, n: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let k = k.min(n);
    (1u128 << n) - (1u128 << (n - k))
}
