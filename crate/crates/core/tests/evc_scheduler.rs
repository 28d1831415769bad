use num_complex::Complex64;
use proptest::prelude::*;

use qrtile::error::Error;
use qrtile::evc::{
    combinations, exact_min_tiles, index_order_baseline, merge_terms, partitioned_tile_search, tiling_pauli_strings,
    PauliTermGroup, PauliTile, PauliTilePlan,
};
use qrtile::layout::ClusterShape;
use qrtile::models::{gen_random_terms, gen_synthetic_jw};
use qrtile::pauli::{Pauli, PauliString, PauliTerm};
use qrtile::qubits::QubitSet;

fn term(n: usize, letters: &[(Pauli, usize)]) -> PauliTerm {
    PauliTerm::new(Complex64::new(1.0, 0.0), PauliString::from_sparse(n, letters).unwrap())
}

fn tile_count(terms: &[PauliTerm], n: usize, n_local: usize, diagonalize: bool) -> Option<usize> {
    match tiling_pauli_strings(&merge_terms(terms, diagonalize), n, n_local) {
        Ok(t) => Some(t.len()),
        Err(Error::TermTooWide { .. }) => None,
        Err(e) => panic!("unexpected {e:?}"),
    }
}

/// Every term sits in exactly one group, inside its representative.
fn check_groups(terms: &[PauliTerm], groups: &[PauliTermGroup], diagonalize: bool) -> Result<(), String> {
    let mut seen = vec![0; terms.len()];
    for g in groups {
        for &i in &g.members {
            seen[i] += 1;
            if !terms[i].string.effective_targets(diagonalize).is_subset(g.representative) {
                return Err(format!("term {i} escapes its group"));
            }
        }
        if terms[g.members[0]].string.effective_targets(diagonalize) != g.representative {
            return Err("representative is not its first member's target set".into());
        }
    }
    if seen.iter().any(|&c| c != 1) {
        return Err("terms are not partitioned".into());
    }
    Ok(())
}

/// Re-scans every candidate at every step: each tile must take the maximum
/// number of uncovered groups, and be the lexicographically first to do so.
fn check_greedy(groups: &[PauliTermGroup], tiles: &[PauliTile], n: usize, n_local: usize) -> Result<(), String> {
    let mut alive: Vec<bool> = vec![true; groups.len()];
    for (k, t) in tiles.iter().enumerate() {
        let covered = |c: QubitSet| (0..groups.len()).filter(|&g| alive[g] && groups[g].representative.is_subset(c)).count();
        let mut best: Option<(usize, QubitSet)> = None;
        for c in combinations(n, n_local) {
            let got = covered(c);
            if best.is_none_or(|(b, _)| got > b) {
                best = Some((got, c));
            }
        }
        let (count, first) = best.unwrap();
        if t.local_qubits != first || t.groups.len() != count || covered(t.local_qubits) != count {
            return Err(format!("tile {k} is not the first maximal candidate"));
        }
        for &g in &t.groups {
            if !alive[g] || !groups[g].representative.is_subset(t.local_qubits) {
                return Err(format!("tile {k} takes group {g} wrongly"));
            }
            alive[g] = false;
        }
    }
    if alive.iter().any(|&a| a) {
        return Err("groups left uncovered".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn merge_partitions_terms(n in 1usize..=12, m in 0usize..60, k in 1usize..=6, seed: u64, diag: bool) {
        let terms = gen_random_terms(n, m, k, seed);
        let groups = merge_terms(&terms, diag);
        prop_assert_eq!(check_groups(&terms, &groups, diag), Ok(()));
        prop_assert!(groups.len() <= terms.len());
    }

    #[test]
    fn greedy_is_maximal_at_every_step(n in 2usize..=9, m in 1usize..40, k in 1usize..=4, nl in 1usize..=6, seed: u64, diag: bool) {
        let n_local = nl.min(n);
        let terms = gen_random_terms(n, m, k.min(n_local), seed);
        let groups = merge_terms(&terms, diag);
        let tiles = tiling_pauli_strings(&groups, n, n_local).unwrap();
        prop_assert_eq!(check_greedy(&groups, &tiles, n, n_local), Ok(()));
        let mut all: Vec<usize> = tiles.iter().flat_map(|t| t.terms.iter().copied()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..m).collect::<Vec<_>>());
    }

    #[test]
    fn partitioned_search_matches_serial(n in 2usize..=12, m in 1usize..80, k in 1usize..=5, nl in 1usize..=8, seed: u64) {
        let n_local = nl.min(n);
        let terms = gen_random_terms(n, m, k.min(n_local), seed);
        let groups = merge_terms(&terms, true);
        let serial = tiling_pauli_strings(&groups, n, n_local).unwrap();
        for w in [1, 2, 3, 4, 8] {
            prop_assert_eq!(&partitioned_tile_search(&groups, n, n_local, w).unwrap(), &serial);
        }
    }

    #[test]
    fn diagonalization_never_adds_tiles(n in 2usize..=10, m in 1usize..50, k in 1usize..=6, nl in 1usize..=6, seed: u64) {
        let n_local = nl.min(n);
        let terms = gen_random_terms(n, m, k, seed);
        let on = tile_count(&terms, n, n_local, true);
        let off = tile_count(&terms, n, n_local, false);
        // an unbounded count stands for a term that cannot be tiled at all
        match (on, off) {
            (Some(a), Some(b)) => prop_assert!(a <= b, "on {} off {}", a, b),
            (None, Some(_)) => prop_assert!(false, "diagonalization made a term too wide"),
            _ => {}
        }
    }

    #[test]
    fn greedy_is_never_below_the_exact_cover(n in 2usize..=8, m in 1usize..=12, k in 1usize..=4, nl in 1usize..=5, seed: u64) {
        let n_local = nl.min(n);
        let terms = gen_random_terms(n, m, k.min(n_local), seed);
        let groups = merge_terms(&terms, true);
        let greedy = tiling_pauli_strings(&groups, n, n_local).unwrap().len();
        let exact = exact_min_tiles(&groups, n, n_local).unwrap();
        prop_assert!(exact <= greedy);
        prop_assert!(exact >= 1);
    }
}

#[test]
fn three_term_example() {
    use Pauli::*;
    let terms = vec![term(4, &[(Z, 0), (Z, 1)]), term(4, &[(X, 0), (X, 1)]), term(4, &[(X, 2), (X, 3)])];
    let plan = PauliTilePlan::build(&terms, 4, ClusterShape::flat(4).unwrap(), false, 1).unwrap();
    let locals: Vec<Vec<usize>> = plan.tiles.iter().map(|t| t.local_qubits.to_vec()).collect();
    assert_eq!(locals, vec![vec![0, 1], vec![2, 3]]);
    assert_eq!(plan.qr_counts().total, 1);
    let groups = merge_terms(&terms, false);
    assert_eq!(exact_min_tiles(&groups, 4, 2).unwrap(), 2);
    assert_eq!(partitioned_tile_search(&groups, 4, 2, 4).unwrap(), plan.tiles);
}

#[test]
fn overlapping_terms_need_three_tiles() {
    use Pauli::*;
    let n = 8;
    let terms = vec![
        term(n, &[(Z, 0), (Y, 1), (X, 3), (Y, 4), (Z, 7)]),
        term(n, &[(X, 2), (Z, 6), (X, 7)]),
        term(n, &[(X, 0), (Y, 3), (Z, 4), (X, 6)]),
    ];
    // effective targets {1,3,4}, {2,7}, {0,3,6}: no two fit in four qubits together
    let groups = merge_terms(&terms, true);
    let tiles = tiling_pauli_strings(&groups, n, 4).unwrap();
    assert_eq!(tiles.len(), 3);
    assert_eq!(exact_min_tiles(&groups, n, 4).unwrap(), 3);
    assert_eq!(tiling_pauli_strings(&groups, n, 5).unwrap().len(), 2);
}

#[test]
fn diagonal_terms_need_one_tile() {
    use Pauli::*;
    let n = 8;
    let terms: Vec<PauliTerm> = (0..n - 1).map(|q| term(n, &[(Z, q), (Z, q + 1)])).collect();
    let plan = PauliTilePlan::build(&terms, n, ClusterShape::flat(4).unwrap(), true, 1).unwrap();
    assert_eq!(plan.tiles.len(), 1);
    assert!(plan.qr_events.is_empty());
}

#[test]
fn merge_examples() {
    use Pauli::*;
    let n = 6;
    let terms = vec![term(n, &[(X, 1)]), term(n, &[(X, 0), (Y, 1), (X, 2)]), term(n, &[(X, 4), (X, 5)])];
    let groups = merge_terms(&terms, true);
    assert_eq!(groups.len(), 2);
    assert_eq!(groups[0].members, vec![1, 0]);
    assert_eq!(groups[1].members, vec![2]);
    assert!(merge_terms(&[], true).is_empty());
}

#[test]
fn jw_tiling_and_baseline() {
    let n = 12;
    let terms = gen_synthetic_jw(n, 0);
    let shape = ClusterShape::flat(4).unwrap();
    let groups = merge_terms(&terms, true);
    assert!(groups.len() < terms.len());
    let plan = PauliTilePlan::build(&terms, n, shape, true, 1).unwrap();
    assert!(plan.qr_counts().total <= 5, "{} QRs", plan.qr_counts().total);
    assert_eq!(plan.qr_events.len(), plan.tiles.len() - 1);
    for w in [2, 4, 8] {
        let other = PauliTilePlan::build(&terms, n, shape, true, w).unwrap();
        assert_eq!(other.to_json(), plan.to_json());
    }
    let baseline = index_order_baseline(&terms, n, shape).unwrap();
    let ratio = baseline.qr_count() as f64 / plan.qr_counts().total.max(1) as f64;
    assert!(ratio >= 20.0, "ratio {ratio}");
    // without diagonalization the Z chains no longer fit in n_L = 10
    assert!(matches!(
        PauliTilePlan::build(&terms, n, shape, false, 1),
        Err(Error::TermTooWide { size: 12, n_local: 10 })
    ));
}

#[test]
fn baseline_examples() {
    use Pauli::*;
    let n = 6;
    let shape = ClusterShape::flat(4).unwrap();
    let local: Vec<PauliTerm> = (0..4).map(|q| term(n, &[(X, q)])).collect();
    assert_eq!(index_order_baseline(&local, n, shape).unwrap().qr_count(), 0);
    let alternating: Vec<PauliTerm> = (0..8).map(|i| term(n, &[(X, if i % 2 == 0 { 0 } else { n - 1 })])).collect();
    // one remap per alternation
    assert_eq!(index_order_baseline(&alternating, n, shape).unwrap().qr_count(), 7);
    assert_eq!(index_order_baseline(&[], n, shape).unwrap().qr_count(), 0);
}

#[test]
fn plan_json_shape() {
    let terms = gen_synthetic_jw(6, 3);
    let plan = PauliTilePlan::build(&terms, 6, ClusterShape::flat(4).unwrap(), true, 1).unwrap();
    let v: serde_json::Value = serde_json::from_str(&plan.to_json()).unwrap();
    assert_eq!(v["diagonalize"], true);
    let tiles = v["tiles"].as_array().unwrap();
    assert_eq!(tiles.len(), plan.tiles.len());
    for (t, want) in tiles.iter().zip(&plan.tiles) {
        assert_eq!(t["local_qubits"].as_array().unwrap().len(), 4);
        assert_eq!(t["terms"].as_array().unwrap().len(), want.terms.len());
    }
    assert_eq!(v["qr_events"].as_array().unwrap().len(), plan.qr_events.len());
}
