//! Tiling of Hamiltonian terms for expectation value computation.
//!
//! Terms commute, so any order is legal; the tiler covers all term groups with
//! as few local-qubit sets as it can by repeatedly taking the candidate set
//! that holds the most remaining groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{ClusterShape, QrCounts, QrEvent, QubitLayout};
use crate::pauli::PauliTerm;
use crate::qsu::adhoc_swaps;
use crate::qubits::QubitSet;
use crate::schedule::QrEventWire;

/// Terms whose effective targets fit inside one representative set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliTermGroup {
    pub representative: QubitSet,
    /// Indices into the term list.
    pub members: Vec<usize>,
}

/// Groups terms by subset inclusion. Terms are visited by descending effective
/// target count (ties by index) and join the first group whose representative
/// contains them.
pub fn merge_terms(terms: &[PauliTerm], diagonalize: bool) -> Vec<PauliTermGroup> {
    let eff: Vec<QubitSet> = terms.iter().map(|t| t.string.effective_targets(diagonalize)).collect();
    let mut idx: Vec<usize> = (0..terms.len()).collect();
    idx.sort_by(|&a, &b| eff[b].len().cmp(&eff[a].len()).then(a.cmp(&b)));
    let mut groups: Vec<PauliTermGroup> = Vec::new();
    for i in idx {
        match groups.iter_mut().find(|g| eff[i].is_subset(g.representative)) {
            Some(g) => g.members.push(i),
            None => groups.push(PauliTermGroup { representative: eff[i], members: vec![i] }),
        }
    }
    groups
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<QubitSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.iter().collect());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliTile {
    pub local_qubits: QubitSet,
    /// Group indices covered by this tile.
    #[serde(skip)]
    pub groups: Vec<usize>,
    /// Term indices, ascending.
    pub terms: Vec<usize>,
}

/// First candidate with the most contained representatives: `(count, index)`.
fn best_in(candidates: &[QubitSet], offset: usize, reps: &[QubitSet]) -> (usize, usize) {
    let mut best = (0, usize::MAX);
    for (i, &c) in candidates.iter().enumerate() {
        let count = reps.iter().filter(|r| r.is_subset(c)).count();
        if count > best.0 {
            best = (count, offset + i);
        }
    }
    best
}

fn check_widths(groups: &[PauliTermGroup], n_local: usize) -> Result<()> {
    match groups.iter().map(|g| g.representative.len()).max() {
        Some(size) if size > n_local => Err(Error::TermTooWide { size, n_local }),
        _ => Ok(()),
    }
}

fn greedy_tiles<F>(groups: &[PauliTermGroup], n: usize, n_local: usize, mut search: F) -> Result<Vec<PauliTile>>
where
    F: FnMut(&[QubitSet], &[QubitSet]) -> (usize, usize),
{
    check_widths(groups, n_local)?;
    let candidates = combinations(n, n_local);
    let mut alive: Vec<usize> = (0..groups.len()).collect();
    let mut tiles = Vec::new();
    while !alive.is_empty() {
        let reps: Vec<QubitSet> = alive.iter().map(|&g| groups[g].representative).collect();
        let (count, at) = search(&candidates, &reps);
        debug_assert!(count > 0);
        let local = candidates[at];
        let (taken, rest): (Vec<usize>, Vec<usize>) =
            alive.iter().partition(|&&g| groups[g].representative.is_subset(local));
        let mut terms: Vec<usize> = taken.iter().flat_map(|&g| groups[g].members.iter().copied()).collect();
        terms.sort_unstable();
        tiles.push(PauliTile { local_qubits: local, groups: taken, terms });
        alive = rest;
    }
    Ok(tiles)
}

/// Serial greedy tiler over every `n_L`-subset of the qubits.
pub fn tiling_pauli_strings(groups: &[PauliTermGroup], n: usize, n_local: usize) -> Result<Vec<PauliTile>> {
    greedy_tiles(groups, n, n_local, |cands, reps| best_in(cands, 0, reps))
}

/// Same result as [`tiling_pauli_strings`], with the candidate scan split into
/// `workers` contiguous ranges searched on separate threads.
pub fn partitioned_tile_search(
    groups: &[PauliTermGroup],
    n: usize,
    n_local: usize,
    workers: usize,
) -> Result<Vec<PauliTile>> {
    let workers = workers.max(1);
    greedy_tiles(groups, n, n_local, |cands, reps| {
        let chunk = cands.len().div_ceil(workers).max(1);
        let locals: Vec<(usize, usize)> = std::thread::scope(|s| {
            let handles: Vec<_> = cands
                .chunks(chunk)
                .enumerate()
                .map(|(w, part)| s.spawn(move || best_in(part, w * chunk, reps)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("tile search worker")).collect()
        });
        // ranges are in enumeration order, so the first strict maximum wins ties
        locals.into_iter().fold((0, usize::MAX), |best, cur| if cur.0 > best.0 { cur } else { best })
    })
}

/// Tiles plus the reorderings between them.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTilePlan {
    pub diagonalize: bool,
    pub tiles: Vec<PauliTile>,
    /// `tiles.len() - 1` events, the i-th one running between tiles i and i+1.
    pub qr_events: Vec<QrEvent>,
}

impl PauliTilePlan {
    /// Events are laid out starting from the first tile's local set placed by
    /// the same position rule as QSU, from the identity layout.
    pub fn new(tiles: Vec<PauliTile>, n: usize, shape: ClusterShape, diagonalize: bool) -> Result<Self> {
        let mut layout = QubitLayout::identity(n, shape)?;
        let mut qr_events = Vec::new();
        for (i, t) in tiles.iter().enumerate() {
            let swaps = layout.transition_swaps(t.local_qubits, None);
            if i == 0 {
                layout = layout.with_swaps(&swaps);
            } else if !swaps.is_empty() {
                let e = QrEvent::new(layout.clone(), swaps)?;
                layout = e.after().clone();
                qr_events.push(e);
            }
        }
        Ok(PauliTilePlan { diagonalize, tiles, qr_events })
    }

    /// Merge, tile and lay out a Hamiltonian in one go.
    pub fn build(
        terms: &[PauliTerm],
        n: usize,
        shape: ClusterShape,
        diagonalize: bool,
        workers: usize,
    ) -> Result<Self> {
        let n_local = shape.n_local(n)?;
        let groups = merge_terms(terms, diagonalize);
        let tiles = if workers <= 1 {
            tiling_pauli_strings(&groups, n, n_local)?
        } else {
            partitioned_tile_search(&groups, n, n_local, workers)?
        };
        PauliTilePlan::new(tiles, n, shape, diagonalize)
    }

    pub fn qr_counts(&self) -> QrCounts {
        QrCounts::from_events(&self.qr_events)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            diagonalize: bool,
            tiles: &'a [PauliTile],
            qr_events: Vec<QrEventWire>,
        }
        serde_json::to_string(&Wire {
            diagonalize: self.diagonalize,
            tiles: &self.tiles,
            qr_events: self.qr_events.iter().map(QrEventWire::from).collect(),
        })
        .expect("plan serializes")
    }
}

/// Outcome of the index-order baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineRun {
    /// `(term index, targets made local)` in execution order.
    pub steps: Vec<(usize, QubitSet)>,
    pub qr_events: Vec<QrEvent>,
}

impl BaselineRun {
    pub fn qr_count(&self) -> usize {
        self.qr_events.len()
    }
}

/// Terms in index order, each applied like a gate on its full target set,
/// with an on-demand remap before every non-local one. A term touching more
/// than `n_L` qubits is applied in ascending chunks of `n_L` letters.
pub fn index_order_baseline(terms: &[PauliTerm], n: usize, shape: ClusterShape) -> Result<BaselineRun> {
    let mut layout = QubitLayout::identity(n, shape)?;
    let n_local = layout.n_local();
    let mut steps = Vec::new();
    let mut qr_events = Vec::new();
    for (i, term) in terms.iter().enumerate() {
        let all = term.string.targets().to_vec();
        for chunk in all.chunks(n_local.max(1)) {
            let t: QubitSet = chunk.iter().collect();
            if !t.is_subset(layout.local_set()) {
                let e = QrEvent::new(layout.clone(), adhoc_swaps(&layout, t))?;
                layout = e.after().clone();
                qr_events.push(e);
            }
            steps.push((i, t));
        }
    }
    Ok(BaselineRun { steps, qr_events })
}

/// Fewest `n_L`-subsets covering every group, by breadth-first search over
/// covered-group masks. Audit helper for small instances (at most 20 groups).
pub fn exact_min_tiles(groups: &[PauliTermGroup], n: usize, n_local: usize) -> Result<usize> {
    check_widths(groups, n_local)?;
    let g = groups.len();
    assert!(g <= 20, "exhaustive cover limited to 20 groups");
    if g == 0 {
        return Ok(0);
    }
    let full = (1u32 << g) - 1;
    let mut covers: Vec<u32> = combinations(n, n_local)
        .into_iter()
        .map(|c| {
            groups
                .iter()
                .enumerate()
                .filter(|(_, gr)| gr.representative.is_subset(c))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    covers.sort_unstable();
    covers.dedup();
    let mut dist = vec![u8::MAX; 1 << g];
    dist[0] = 0;
    let mut frontier = vec![0u32];
    let mut depth = 0u8;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &m in &frontier {
            for &c in &covers {
                let nm = m | c;
                if dist[nm as usize] == u8::MAX {
                    dist[nm as usize] = depth;
                    if nm == full {
                        return Ok(depth as usize);
                    }
                    next.push(nm);
                }
            }
        }
        frontier = next;
    }
    unreachable!("every group fits in some candidate")
}
