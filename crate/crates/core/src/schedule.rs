//! Schedules: execution order `g`, per-operator local-qubit map `M`, and the
//! QR events between tiles.

use serde::{Deserialize, Serialize};

use crate::circuit::{validate_schedule, Circuit, DependencyGraph};
use crate::error::{Error, Result};
use crate::layout::{count_mapping_changes, CostWeights, QrClass, QrCounts, QrEvent, QubitLayout};
use crate::qubits::QubitSet;

/// Operators executed back to back under one local-qubit set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub gates: Vec<usize>,
    pub local_qubits: QubitSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    initial: QubitLayout,
    order: Vec<usize>,
    mapping: Vec<QubitSet>,
    tiles: Vec<Tile>,
    qr_events: Vec<QrEvent>,
}

impl Schedule {
    pub fn initial_layout(&self) -> &QubitLayout {
        &self.initial
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `M(op)` for every operator id.
    pub fn mapping(&self, id: usize) -> QubitSet {
        self.mapping[id]
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn qr_events(&self) -> &[QrEvent] {
        &self.qr_events
    }

    pub fn n_local(&self) -> usize {
        self.initial.n_local()
    }

    /// Layout every tile runs under, with the event (if any) that precedes it.
    pub fn steps(&self) -> Vec<(Option<&QrEvent>, &Tile)> {
        let mut events = self.qr_events.iter();
        let mut local = self.initial.local_set();
        self.tiles
            .iter()
            .map(|t| {
                let ev = (t.local_qubits != local).then(|| events.next()).flatten();
                local = t.local_qubits;
                (ev, t)
            })
            .collect()
    }

    /// Checks C1 (dependencies), C2 (narrow access), coverage and that the
    /// event list replays onto the tile mappings.
    pub fn verify(&self, circuit: &Circuit, deps: &DependencyGraph) -> Result<()> {
        if let Some(v) = validate_schedule(circuit, deps, &self.order)? {
            return Err(Error::InvalidSchedule(format!("operator {} runs before its dependency {}", v.succ, v.pred)));
        }
        for op in circuit.ops() {
            if !op.target_set().is_subset(self.mapping[op.id()]) {
                return Err(Error::AccessViolation(op.id()));
            }
        }
        let flat: Vec<usize> = self.tiles.iter().flat_map(|t| t.gates.iter().copied()).collect();
        if flat != self.order {
            return Err(Error::InvalidSchedule("tiles do not concatenate to the order".into()));
        }
        let mut layout = self.initial.clone();
        let mut events = self.qr_events.iter();
        for t in &self.tiles {
            if t.local_qubits.len() != self.n_local() {
                return Err(Error::InvalidSchedule("tile local set has wrong size".into()));
            }
            if t.local_qubits != layout.local_set() {
                let e = events.next().ok_or_else(|| Error::InvalidSchedule("missing QR event".into()))?;
                if e.before() != &layout {
                    return Err(Error::LayoutMismatch);
                }
                layout = e.after().clone();
                if layout.local_set() != t.local_qubits {
                    return Err(Error::InvalidSchedule("QR event does not reach the tile mapping".into()));
                }
            }
            if t.gates.iter().any(|&g| self.mapping[g] != t.local_qubits) {
                return Err(Error::InvalidSchedule("mapping disagrees with tile".into()));
            }
        }
        if events.next().is_some() {
            return Err(Error::InvalidSchedule("unused QR events".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ScheduleWire::from(self)).expect("schedule serializes")
    }

    /// Rebuilds a schedule from its JSON form, replaying swaps from `initial`.
    pub fn from_json(text: &str, initial: QubitLayout, m: usize) -> Result<Self> {
        let wire: ScheduleWire = serde_json::from_str(text)?;
        let mut b = ScheduleBuilder::new(initial, m);
        let mut events = wire.qr_events.into_iter();
        for t in wire.tiles {
            if t.local_qubits != b.layout().local_set() {
                let e = events.next().ok_or_else(|| Error::InvalidSchedule("missing QR event".into()))?;
                let class = e.class;
                b.apply_swaps(e.swaps.into_iter().map(|[a, b]| (a, b)).collect())?;
                if b.qr_events.last().map(QrEvent::class) != Some(class) {
                    return Err(Error::InvalidSchedule("QR class does not match swaps".into()));
                }
            }
            if t.local_qubits != b.layout().local_set() {
                return Err(Error::InvalidSchedule("QR event does not reach the tile mapping".into()));
            }
            b.push_tile(t.gates);
        }
        let s = b.finish();
        if s.order != wire.order {
            return Err(Error::InvalidSchedule("order disagrees with tiles".into()));
        }
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct QrEventWire {
    pub swaps: Vec<[usize; 2]>,
    pub class: QrClass,
}

impl From<&QrEvent> for QrEventWire {
    fn from(e: &QrEvent) -> Self {
        QrEventWire { swaps: e.swaps().iter().map(|&(a, b)| [a, b]).collect(), class: e.class() }
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleWire {
    order: Vec<usize>,
    tiles: Vec<Tile>,
    qr_events: Vec<QrEventWire>,
}

impl From<&Schedule> for ScheduleWire {
    fn from(s: &Schedule) -> Self {
        ScheduleWire {
            order: s.order.clone(),
            tiles: s.tiles.clone(),
            qr_events: s.qr_events.iter().map(QrEventWire::from).collect(),
        }
    }
}

/// Incremental schedule construction shared by the schedulers.
pub(crate) struct ScheduleBuilder {
    initial: QubitLayout,
    layout: QubitLayout,
    order: Vec<usize>,
    mapping: Vec<QubitSet>,
    tiles: Vec<Tile>,
    qr_events: Vec<QrEvent>,
}

impl ScheduleBuilder {
    pub fn new(initial: QubitLayout, m: usize) -> Self {
        ScheduleBuilder {
            layout: initial.clone(),
            initial,
            order: Vec::with_capacity(m),
            mapping: vec![QubitSet::EMPTY; m],
            tiles: Vec::new(),
            qr_events: Vec::new(),
        }
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    /// Appends gates under the current layout, merging with the previous tile
    /// when the local set is unchanged.
    pub fn push_tile(&mut self, gates: Vec<usize>) {
        if gates.is_empty() {
            return;
        }
        let local = self.layout.local_set();
        for &g in &gates {
            self.mapping[g] = local;
        }
        self.order.extend_from_slice(&gates);
        match self.tiles.last_mut() {
            Some(t) if t.local_qubits == local => t.gates.extend(gates),
            _ => self.tiles.push(Tile { gates, local_qubits: local }),
        }
    }

    /// Moves to a new local (and optionally intra) set, emitting a QR event
    /// when any global position changes.
    pub fn reorder(&mut self, local: QubitSet, intra: Option<QubitSet>) -> Result<()> {
        let swaps = self.layout.transition_swaps(local, intra);
        if swaps.is_empty() {
            return Ok(());
        }
        self.apply_swaps(swaps)
    }

    pub fn apply_swaps(&mut self, swaps: Vec<(usize, usize)>) -> Result<()> {
        let e = QrEvent::new(self.layout.clone(), swaps)?;
        self.layout = e.after().clone();
        self.qr_events.push(e);
        Ok(())
    }

    pub fn finish(self) -> Schedule {
        Schedule {
            initial: self.initial,
            order: self.order,
            mapping: self.mapping,
            tiles: self.tiles,
            qr_events: self.qr_events,
        }
    }
}

/// `N_qr` from the mapping sequence and the intra/inter split from the events.
pub fn count_qrs(schedule: &Schedule) -> QrCounts {
    let total = count_mapping_changes(schedule.n_local(), schedule.order.iter().map(|&id| schedule.mapping[id]));
    let by_class = QrCounts::from_events(&schedule.qr_events);
    debug_assert_eq!(total, by_class.total, "every mapping change carries one event");
    QrCounts { total, ..by_class }
}

pub fn qr_cost(schedule: &Schedule, w: CostWeights) -> f64 {
    count_qrs(schedule).cost(w)
}
