//! Gate scheduling for quantum state update: flat and hierarchical
//! time-space tiling, and the breadth-first ad hoc baseline.
//!
//! Every scheduler starts from the identity layout (`Q_L = {0, .., n_L-1}`)
//! and consumes the depth-sorted gate list, which is computed once.
//!
//! Tiling never stalls when every gate fits in `n_L` qubits: the next mapping
//! always admits the first selected gate `U*`, whose targets are disjoint from
//! every gate ahead of it in the remaining list (those were all blocked during
//! selection), so tile construction under the new mapping appends `U*` at the
//! latest. The same argument shows `U*` is not narrow under the old mapping,
//! so consecutive tiles always differ in local set.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{depth_sort, Circuit, DependencyGraph};
use crate::error::{Error, Result};
use crate::layout::{ClusterShape, QubitLayout};
use crate::qubits::QubitSet;
use crate::schedule::{Schedule, ScheduleBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchedulerKind {
    Flat,
    Hierarchical,
    Adhoc,
}

impl SchedulerKind {
    pub const ALL: [SchedulerKind; 3] = [SchedulerKind::Flat, SchedulerKind::Hierarchical, SchedulerKind::Adhoc];

    pub fn run(self, circuit: &Circuit, deps: &DependencyGraph, shape: ClusterShape) -> Result<Schedule> {
        match self {
            SchedulerKind::Flat => flat_tiling(circuit, deps, shape),
            SchedulerKind::Hierarchical => hierarchical_tiling(circuit, deps, shape),
            SchedulerKind::Adhoc => adhoc_schedule(circuit, deps, shape),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::Flat => "flat",
            SchedulerKind::Hierarchical => "hierarchical",
            SchedulerKind::Adhoc => "adhoc",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchedulerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(SchedulerKind::Flat),
            "hierarchical" => Ok(SchedulerKind::Hierarchical),
            "adhoc" => Ok(SchedulerKind::Adhoc),
            _ => Err(Error::Config(format!("unknown scheduler `{s}`"))),
        }
    }
}

/// Scans `remaining` in order, taking every gate whose targets are still
/// available; a gate that cannot be taken blocks its targets for the rest of
/// the scan. Returns the tile and the number of gates scanned.
pub fn tile_construction(local: QubitSet, remaining: &[usize], targets: &[QubitSet]) -> (Vec<usize>, usize) {
    let mut avail = local;
    let mut tile = Vec::new();
    let mut scanned = 0;
    for &id in remaining {
        scanned += 1;
        let t = targets[id];
        if t.is_subset(avail) {
            tile.push(id);
        } else {
            avail = avail.difference(t);
        }
        if avail.is_empty() {
            break;
        }
    }
    (tile, scanned)
}

/// Greedy choice of the next local set from `candidates`, favouring the
/// targets of the shallowest remaining gates. Returns the empty set when gates
/// remain but none can be selected; otherwise pads with the lowest unused
/// candidates up to `n_local`.
pub fn qubit_mapping(candidates: QubitSet, remaining: &[usize], targets: &[QubitSet], n_local: usize) -> QubitSet {
    let mut avail = candidates;
    let mut selected = QubitSet::EMPTY;
    for &id in remaining {
        // a full selection can no longer change
        if selected.len() == n_local {
            break;
        }
        let t = targets[id];
        if t.is_subset(avail) && selected.union(t).len() <= n_local {
            selected = selected.union(t);
        } else {
            avail = avail.difference(t);
        }
        if avail.is_empty() {
            break;
        }
    }
    if selected.is_empty() && !remaining.is_empty() {
        return QubitSet::EMPTY;
    }
    for q in candidates.difference(selected) {
        if selected.len() >= n_local {
            break;
        }
        selected.insert(q);
    }
    selected
}

/// Two-phase mapping: first try to stay within the current local and intra
/// qubits (intra QR), else choose from all qubits (inter QR).
pub fn hierarchical_qubit_mapping(
    all: QubitSet,
    remaining: &[usize],
    targets: &[QubitSet],
    local: QubitSet,
    intra: QubitSet,
) -> (QubitSet, QubitSet) {
    let (n_local, n_intra) = (local.len(), intra.len());
    let node = local.union(intra);
    let first = qubit_mapping(node, remaining, targets, n_local);
    if !first.is_empty() {
        return (first, node.difference(first));
    }
    let new_local = qubit_mapping(all, remaining, targets, n_local);
    let wider = qubit_mapping(all, remaining, targets, n_local + n_intra);
    // the wider selection need not contain the narrower one; keep the lowest
    // leftovers and top up with the lowest free qubits
    let mut new_intra = QubitSet::EMPTY;
    let pool = wider.difference(new_local).iter().chain(all.difference(new_local).difference(wider).iter());
    for q in pool.take(n_intra) {
        new_intra.insert(q);
    }
    (new_local, new_intra)
}

/// Depth-sorted gate list with O(tile + scanned) removal of a scanned prefix.
struct Remaining {
    ids: Vec<usize>,
    start: usize,
    done: Vec<bool>,
}

impl Remaining {
    fn new(ids: Vec<usize>) -> Self {
        let m = ids.len();
        Remaining { ids, start: 0, done: vec![false; m] }
    }

    fn as_slice(&self) -> &[usize] {
        &self.ids[self.start..]
    }

    fn is_empty(&self) -> bool {
        self.start == self.ids.len()
    }

    fn remove(&mut self, tile: &[usize], scanned: usize) {
        for &id in tile {
            self.done[id] = true;
        }
        let end = self.start + scanned;
        let mut w = end;
        for r in (self.start..end).rev() {
            let id = self.ids[r];
            if !self.done[id] {
                w -= 1;
                self.ids[w] = id;
            }
        }
        self.start = w;
    }
}

fn prepare(circuit: &Circuit, shape: ClusterShape) -> Result<(QubitLayout, Vec<QubitSet>)> {
    let layout = QubitLayout::identity(circuit.n(), shape)?;
    let n_local = layout.n_local();
    if let Some(op) = circuit.ops().iter().find(|op| op.arity() > n_local) {
        return Err(Error::GateTooWide { id: op.id(), arity: op.arity(), n_local });
    }
    let targets = (0..circuit.len()).map(|id| circuit.targets(id)).collect();
    Ok((layout, targets))
}

fn tiling(
    circuit: &Circuit,
    deps: &DependencyGraph,
    shape: ClusterShape,
    hierarchical: bool,
) -> Result<Schedule> {
    let (layout, targets) = prepare(circuit, shape)?;
    let all = QubitSet::range(circuit.n());
    let n_local = layout.n_local();
    let mut remaining = Remaining::new(depth_sort(circuit, deps));
    let mut b = ScheduleBuilder::new(layout, circuit.len());
    let mut remapped = false;
    while !remaining.is_empty() {
        let (tile, scanned) = tile_construction(b.layout().local_set(), remaining.as_slice(), &targets);
        // only the initial layout can leave the first tile empty
        if tile.is_empty() && remapped {
            return Err(Error::SchedulerStuck { remaining: remaining.as_slice().len() });
        }
        if !tile.is_empty() {
            remaining.remove(&tile, scanned);
            b.push_tile(tile);
        }
        if remaining.is_empty() {
            break;
        }
        remapped = true;
        if hierarchical {
            let (local, intra) = hierarchical_qubit_mapping(
                all,
                remaining.as_slice(),
                &targets,
                b.layout().local_set(),
                b.layout().intra_set(),
            );
            b.reorder(local, Some(intra))?;
        } else {
            let local = qubit_mapping(all, remaining.as_slice(), &targets, n_local);
            b.reorder(local, None)?;
        }
    }
    Ok(b.finish())
}

pub fn flat_tiling(circuit: &Circuit, deps: &DependencyGraph, shape: ClusterShape) -> Result<Schedule> {
    tiling(circuit, deps, shape, false)
}

pub fn hierarchical_tiling(circuit: &Circuit, deps: &DependencyGraph, shape: ClusterShape) -> Result<Schedule> {
    tiling(circuit, deps, shape, true)
}

/// Swaps that make `t` local by exchanging each global target (ascending)
/// with the lowest-position local qubit the operator does not touch.
pub(crate) fn adhoc_swaps(layout: &QubitLayout, t: QubitSet) -> Vec<(usize, usize)> {
    let missing = t.difference(layout.local_set());
    let mut used = QubitSet::EMPTY;
    let mut swaps = Vec::with_capacity(missing.len());
    for g in missing {
        let victim = (0..layout.n_local())
            .map(|pos| layout.qubit_at(pos))
            .find(|&q| !t.contains(q) && !used.contains(q))
            .expect("operator arity checked against n_L");
        used.insert(victim);
        swaps.push((g, victim));
    }
    swaps
}

/// Breadth-first execution that remaps on demand before each wide gate.
pub fn adhoc_schedule(circuit: &Circuit, deps: &DependencyGraph, shape: ClusterShape) -> Result<Schedule> {
    let (layout, targets) = prepare(circuit, shape)?;
    let mut b = ScheduleBuilder::new(layout, circuit.len());
    for id in depth_sort(circuit, deps) {
        let t = targets[id];
        if !t.is_subset(b.layout().local_set()) {
            let swaps = adhoc_swaps(b.layout(), t);
            b.apply_swaps(swaps)?;
        }
        b.push_tile(vec![id]);
    }
    Ok(b.finish())
}
