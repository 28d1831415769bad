//! Circuits in QCT form: qubits, operators with target maps, and the
//! dependency relation that constrains execution order.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qubits::{QubitSet, MAX_QUBITS};
use crate::unitary::Unitary;

#[derive(Clone, Debug, PartialEq)]
pub enum OpKind {
    /// A gate. The payload is optional so schedulers can run on target maps alone.
    Gate { payload: Option<Arc<Unitary>> },
    Pauli(PauliString),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    id: usize,
    kind: OpKind,
    /// Targets in listed order; payload bit `b` addresses `targets[b]`.
    targets: Vec<usize>,
    target_set: QubitSet,
}

impl Operator {
    pub fn gate(id: usize, targets: &[usize]) -> Self {
        Operator {
            id,
            kind: OpKind::Gate { payload: None },
            targets: targets.to_vec(),
            target_set: targets.iter().collect(),
        }
    }

    pub fn gate_with(id: usize, targets: &[usize], payload: Unitary) -> Self {
        Operator {
            kind: OpKind::Gate { payload: Some(Arc::new(payload)) },
            ..Operator::gate(id, targets)
        }
    }

    pub fn pauli(id: usize, string: PauliString) -> Self {
        let target_set = string.targets();
        Operator {
            id,
            kind: OpKind::Pauli(string),
            targets: target_set.to_vec(),
            target_set,
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn kind(&self) -> &OpKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn target_set(&self) -> QubitSet {
        self.target_set
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn payload(&self) -> Option<&Unitary> {
        match &self.kind {
            OpKind::Gate { payload } => payload.as_deref(),
            OpKind::Pauli(_) => None,
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self.kind, OpKind::Gate { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    ops: Vec<Operator>,
    pos_of_id: Vec<usize>,
}

impl Circuit {
    /// Operators are kept in the given order, which defines circuit order.
    pub fn new(n: usize, ops: Vec<Operator>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidCircuit(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
        }
        let mut pos_of_id = vec![usize::MAX; ops.len()];
        for (pos, op) in ops.iter().enumerate() {
            if op.id >= ops.len() || pos_of_id[op.id] != usize::MAX {
                return Err(Error::InvalidCircuit(format!(
                    "operator ids must be unique and dense in 0..{}, got {}",
                    ops.len(),
                    op.id
                )));
            }
            pos_of_id[op.id] = pos;
            if let Some(&q) = op.targets.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidCircuit(format!("operator {} targets qubit {q} >= {n}", op.id)));
            }
            match &op.kind {
                OpKind::Gate { payload } => {
                    if op.targets.is_empty() {
                        return Err(Error::InvalidCircuit(format!("gate {} has no targets", op.id)));
                    }
                    if op.target_set.len() != op.targets.len() {
                        return Err(Error::InvalidCircuit(format!("gate {} repeats a target", op.id)));
                    }
                    if let Some(u) = payload {
                        if u.arity() != op.targets.len() {
                            return Err(Error::InvalidCircuit(format!(
                                "gate {} payload arity {} != {} targets",
                                op.id,
                                u.arity(),
                                op.targets.len()
                            )));
                        }
                        if !u.is_unitary(1e-12) {
                            return Err(Error::InvalidCircuit(format!("gate {} payload is not unitary", op.id)));
                        }
                    }
                }
                OpKind::Pauli(s) => {
                    if s.n() != n {
                        return Err(Error::InvalidCircuit(format!(
                            "Pauli string {} has length {} in a {n}-qubit circuit",
                            op.id,
                            s.n()
                        )));
                    }
                }
            }
        }
        Ok(Circuit { n, ops, pos_of_id })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Operators in circuit order.
    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    pub fn op(&self, id: usize) -> &Operator {
        &self.ops[self.pos_of_id[id]]
    }

    pub fn targets(&self, id: usize) -> QubitSet {
        self.op(id).target_set
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(Operator::arity).max().unwrap_or(0)
    }

    pub fn has_payloads(&self) -> bool {
        self.ops.iter().all(|op| !op.is_gate() || op.payload().is_some())
    }

    /// Attaches seeded random unitaries to every gate lacking a payload.
    pub fn bind_random_payloads(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for op in &mut self.ops {
            if let OpKind::Gate { payload } = &mut op.kind {
                if payload.is_none() {
                    *payload = Some(Arc::new(Unitary::random(op.targets.len(), &mut rng)));
                }
            }
        }
    }

    /// Same target map without payloads.
    pub fn strip_payloads(&self) -> Circuit {
        let mut c = self.clone();
        for op in &mut c.ops {
            if let OpKind::Gate { payload } = &mut op.kind {
                *payload = None;
            }
        }
        c
    }
}

/// Direct dependencies under the last-writer-per-qubit rule, plus depths.
#[derive(Clone, Debug, PartialEq)]
pub struct DependencyGraph {
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    depths: Vec<usize>,
}

impl DependencyGraph {
    /// Direct edges `(pred, succ)` sorted ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .preds
            .iter()
            .enumerate()
            .flat_map(|(j, ps)| ps.iter().map(move |&i| (i, j)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn preds(&self, id: usize) -> &[usize] {
        &self.preds[id]
    }

    pub fn succs(&self, id: usize) -> &[usize] {
        &self.succs[id]
    }

    pub fn depth(&self, id: usize) -> usize {
        self.depths[id]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    pub fn circuit_depth(&self) -> usize {
        self.depths.iter().map(|d| d + 1).max().unwrap_or(0)
    }

    /// Whether `from` transitively precedes `to`.
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.depths.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &s in &self.succs[v] {
                if s == to {
                    return true;
                }
                // depth strictly grows along edges, so nothing past `to`'s depth helps
                if !seen[s] && self.depths[s] < self.depths[to] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        false
    }

    /// All pairs of the transitive closure, sorted.
    pub fn closure(&self) -> Vec<(usize, usize)> {
        let m = self.depths.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && self.reaches(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

pub fn build_dependency_graph(circuit: &Circuit) -> DependencyGraph {
    let m = circuit.len();
    let mut preds = vec![Vec::new(); m];
    let mut succs = vec![Vec::new(); m];
    let mut depths = vec![0usize; m];
    let mut last: Vec<Option<usize>> = vec![None; circuit.n()];
    for op in circuit.ops() {
        let j = op.id();
        // Pauli strings of a Hamiltonian commute; they never depend on anything.
        if !op.is_gate() {
            continue;
        }
        let mut ps: Vec<usize> = op.target_set().iter().filter_map(|q| last[q]).collect();
        ps.sort_unstable();
        ps.dedup();
        depths[j] = ps.iter().map(|&i| depths[i] + 1).max().unwrap_or(0);
        for &i in &ps {
            succs[i].push(j);
        }
        for q in op.target_set() {
            last[q] = Some(j);
        }
        preds[j] = ps;
    }
    DependencyGraph { preds, succs, depths }
}

/// Depth ascending, then lexicographically smaller target set, then id.
pub fn depth_sort(circuit: &Circuit, deps: &DependencyGraph) -> Vec<usize> {
    // bucket by depth; gates in one level are pairwise disjoint, so a gate
    // level holds at most n gates
    let levels = deps.depths().iter().max().map_or(0, |&d| d + 1);
    let mut start = vec![0usize; levels + 1];
    for &d in deps.depths() {
        start[d + 1] += 1;
    }
    for d in 0..levels {
        start[d + 1] += start[d];
    }
    let mut next = start.clone();
    let mut ids = vec![0usize; circuit.len()];
    for (id, &d) in deps.depths().iter().enumerate() {
        ids[next[d]] = id;
        next[d] += 1;
    }
    let targets: Vec<QubitSet> = (0..circuit.len()).map(|id| circuit.targets(id)).collect();
    for d in 0..levels {
        // ids within a bucket are ascending, so a stable sort keeps the id tie-break
        ids[start[d]..start[d + 1]].sort_by(|&a, &b| targets[a].lex_cmp(targets[b]));
    }
    ids
}

/// A dependency `pred -> succ` executed in the wrong order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderViolation {
    pub pred: usize,
    pub succ: usize,
}

/// Checks an execution order against the dependency closure. Checking direct
/// edges is sufficient since the closure is generated by them.
pub fn validate_schedule(circuit: &Circuit, deps: &DependencyGraph, order: &[usize]) -> Result<Option<OrderViolation>> {
    let m = circuit.len();
    if order.len() != m {
        return Err(Error::InvalidSchedule(format!("order has {} entries for {m} operators", order.len())));
    }
    let mut slot = vec![usize::MAX; m];
    for (x, &id) in order.iter().enumerate() {
        if id >= m || slot[id] != usize::MAX {
            return Err(Error::InvalidSchedule(format!("order is not a permutation (entry {id})")));
        }
        slot[id] = x;
    }
    for &succ in order {
        if let Some(&pred) = deps.preds(succ).iter().find(|&&p| slot[p] > slot[succ]) {
            return Ok(Some(OrderViolation { pred, succ }));
        }
    }
    Ok(None)
}
