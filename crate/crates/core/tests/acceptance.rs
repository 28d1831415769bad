//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any gating criterion fails.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qrtile::circuit::{build_dependency_graph, Circuit};
use qrtile::evc::{
    exact_min_tiles, index_order_baseline, merge_terms, partitioned_tile_search, tiling_pauli_strings, PauliTilePlan,
};
use qrtile::layout::{qr_data_volume, ClusterShape, CostWeights, QrEvent};
use qrtile::models::{
    fixture, gatefabric_targets, gen_gatefabric, gen_random_circuit, gen_random_terms, gen_synthetic_jw,
    GateFabricSpec,
};
use qrtile::pauli::PauliTerm;
use qrtile::qsu::{flat_tiling, hierarchical_tiling, SchedulerKind};
use qrtile::qubits::QubitSet;
use qrtile::schedule::{count_qrs, qr_cost};
use qrtile::sim::{evaluate_energy, DistributedState, ReferenceState};

const STATE_TOL: f64 = 1e-12;
const ENERGY_REL_TOL: f64 = 1e-10;
const QSU_BUDGET: Duration = Duration::from_secs(120);
const JW_TILING_BUDGET: Duration = Duration::from_secs(10);
const MAX_SLOPE: f64 = 1.2;

struct Outcome {
    pass: bool,
    gating: bool,
    detail: String,
}

impl Outcome {
    fn gate(pass: bool, detail: String) -> Self {
        Outcome { pass, gating: true, detail }
    }
}

/// Relocation audit shared by every suite that executes reorderings.
#[derive(Default)]
struct VolumeAudit {
    qrs: usize,
    mismatches: usize,
}

impl VolumeAudit {
    fn record(&mut self, state: &DistributedState) {
        for r in state.qr_log() {
            self.qrs += 1;
            if r.relocated != qr_data_volume(r.rank, state.n()) {
                self.mismatches += 1;
            }
        }
    }
}

fn energy_ok(got: f64, want: f64) -> bool {
    (got - want).abs() <= ENERGY_REL_TOL * (1.0 + want.abs())
}

/// The seeded corpus: n in [4, 12], p in {2, 4, 8}, payloads bound.
fn qsu_corpus() -> Vec<(Circuit, ClusterShape)> {
    (0..100u64)
        .map(|i| {
            let n = 4 + (i % 9) as usize;
            let p = [2usize, 4, 8][(i / 9 % 3) as usize];
            let n_local = n - p.trailing_zeros() as usize;
            let c = gen_random_circuit(n, 8 * n, n_local.min(3), 1000 + i, true).unwrap();
            (c, ClusterShape::flat(p).unwrap())
        })
        .collect()
}

fn qsu_oracle(audit: &mut VolumeAudit) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (c, shape) in qsu_corpus() {
        let d = build_dependency_graph(&c);
        let mut want = ReferenceState::zero(c.n()).unwrap();
        want.run(&c).unwrap();
        for kind in SchedulerKind::ALL {
            let sc = kind.run(&c, &d, shape).unwrap();
            let mut st = DistributedState::zero(c.n(), shape).unwrap();
            st.run_qsu(&c, &sc).unwrap();
            worst = worst.max(st.flatten().max_abs_diff(&want));
            audit.record(&st);
            runs += 1;
        }
    }
    let took = start.elapsed();
    Outcome::gate(
        worst <= STATE_TOL && took < QSU_BUDGET,
        format!("{runs} runs, max error {worst:.2e} (<= {STATE_TOL:e}), {:.2} s (< {} s)", took.as_secs_f64(), QSU_BUDGET.as_secs()),
    )
}

fn evc_oracle(audit: &mut VolumeAudit) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut cases = 0;
    let mut check = |terms: &[PauliTerm], state: &ReferenceState, shape: ClusterShape, diag: bool| {
        let want = state.expectation(terms).unwrap().re;
        let plan = PauliTilePlan::build(terms, state.n(), shape, diag, 1).unwrap();
        let mut st = DistributedState::from_amplitudes(state.amplitudes(), shape).unwrap();
        let got = st.expectation(&plan, terms).unwrap().value.re;
        audit.record(&st);
        worst = worst.max((got - want).abs() / (1.0 + want.abs()));
        cases += 1;
        if !energy_ok(got, want) {
            failures += 1;
        }
    };
    for n in [8usize, 10, 12] {
        let terms = gen_synthetic_jw(n, n as u64);
        let state = ReferenceState::random(n, &mut ChaCha8Rng::seed_from_u64(50 + n as u64));
        let p4 = ClusterShape::flat(4).unwrap();
        check(&terms, &state, p4, true);
        check(&terms, &state, ClusterShape::flat(1).unwrap(), false);
        let n_local = p4.n_local(n).unwrap();
        let fitting: Vec<PauliTerm> = terms.iter().filter(|t| t.string.targets().len() <= n_local).cloned().collect();
        check(&fitting, &state, p4, false);
    }
    Outcome::gate(failures == 0, format!("{cases} cases, worst relative error {worst:.2e} (<= {ENERGY_REL_TOL:e})"))
}

fn fig6() -> Outcome {
    let f = fixture("gatefabric-fig6").unwrap();
    let d = build_dependency_graph(&f.circuit);
    let s = flat_tiling(&f.circuit, &d, f.shape).unwrap();
    let qrs = count_qrs(&s).total;
    let first = &s.tiles()[0];
    let global = QubitSet::range(16).difference(first.local_qubits);
    let want_global: QubitSet = (12..16).collect();
    Outcome::gate(
        qrs == 3 && first.gates.len() == 9 && global == want_global,
        format!("{qrs} QRs, first tile {} gates under Q_G={:?}", first.gates.len(), global),
    )
}

fn fig8() -> Outcome {
    let f = fixture("gatefabric-fig6").unwrap();
    let d = build_dependency_graph(&f.circuit);
    let shape = ClusterShape::new(4, 4).unwrap();
    let w = CostWeights::default();
    let h = hierarchical_tiling(&f.circuit, &d, shape).unwrap();
    let fl = flat_tiling(&f.circuit, &d, shape).unwrap();
    let hc = count_qrs(&h);
    let (hcost, fcost) = (qr_cost(&h, w), qr_cost(&fl, w));
    Outcome::gate(
        hc.inter == 2 && hc.intra == 3 && hcost == 51.0 && fcost == 72.0,
        format!("{} inter + {} intra, cost {hcost} vs flat {fcost}", hc.inter, hc.intra),
    )
}

const SWEEP_N: [usize; 3] = [8, 12, 16];

fn dominance() -> Outcome {
    let mut violations = Vec::new();
    let mut checked = 0;
    for (i, (c, shape)) in qsu_corpus().into_iter().enumerate() {
        let d = build_dependency_graph(&c);
        let f = count_qrs(&flat_tiling(&c, &d, shape).unwrap()).total;
        let a = count_qrs(&SchedulerKind::Adhoc.run(&c, &d, shape).unwrap()).total;
        checked += 1;
        if f > a {
            violations.push(format!("random #{i}: {f} > {a}"));
        }
    }
    let shapes = [ClusterShape::flat(4).unwrap(), ClusterShape::new(2, 2).unwrap()];
    let mut strict = 0;
    for shape in shapes {
        for n in SWEEP_N {
            for layers in [1, 2, 3, 4, 4 * n] {
                let c = gatefabric_targets(n, layers).unwrap();
                let d = build_dependency_graph(&c);
                let f = count_qrs(&flat_tiling(&c, &d, shape).unwrap()).total;
                let a = count_qrs(&SchedulerKind::Adhoc.run(&c, &d, shape).unwrap()).total;
                checked += 1;
                if f > a || (layers >= 2 && f >= a) {
                    violations.push(format!("gatefabric n={n} layers={layers} p={}: flat {f} adhoc {a}", shape.p()));
                } else if layers >= 2 {
                    strict += 1;
                }
            }
        }
    }
    Outcome::gate(
        violations.is_empty(),
        format!("{checked} instances, {strict} strict GateFabric wins; violations: {violations:?}"),
    )
}

fn hierarchy() -> (Outcome, Outcome) {
    let w = CostWeights::default();
    let shapes: Vec<ClusterShape> =
        [(2, 2), (2, 4), (4, 2), (4, 4)].iter().map(|&(a, b)| ClusterShape::new(a, b).unwrap()).collect();
    let compare = |n: usize, layers: usize, shape: ClusterShape| {
        let c = gatefabric_targets(n, layers).unwrap();
        let d = build_dependency_graph(&c);
        let h = hierarchical_tiling(&c, &d, shape).unwrap();
        let f = flat_tiling(&c, &d, shape).unwrap();
        (count_qrs(&h).inter <= count_qrs(&f).inter, qr_cost(&h, w) <= qr_cost(&f, w), qr_cost(&h, w), qr_cost(&f, w))
    };
    let mut violations = Vec::new();
    let (mut saved, mut total_h, mut total_f) = (0, 0.0, 0.0);
    let mut checked = 0;
    for &shape in &shapes {
        for n in SWEEP_N {
            let (inter_ok, cost_ok, hc, fc) = compare(n, 4 * n, shape);
            checked += 1;
            total_h += hc;
            total_f += fc;
            if hc < fc {
                saved += 1;
            }
            if !(inter_ok && cost_ok) {
                violations.push(format!("n={n} {}x{}: cost {hc} vs {fc}", shape.nodes(), shape.gpn()));
            }
        }
    }
    let gating = Outcome::gate(
        violations.is_empty(),
        format!(
            "{checked} instances (layers = 4n), {saved} strictly cheaper, total cost {total_h} vs {total_f}; violations: {violations:?}"
        ),
    );
    // outside the sweep's layer count the cost inequality is not guaranteed
    let mut off = Vec::new();
    let mut probed = 0;
    for &shape in &shapes {
        for n in SWEEP_N {
            for layers in 1..=6 {
                if shape.n_global() + 4 > n {
                    continue;
                }
                probed += 1;
                let (inter_ok, cost_ok, hc, fc) = compare(n, layers, shape);
                if !inter_ok || !cost_ok {
                    off.push(format!("n={n} layers={layers} {}x{}: {hc} vs {fc}", shape.nodes(), shape.gpn()));
                }
            }
        }
    }
    let report = Outcome {
        pass: true,
        gating: false,
        detail: format!("short circuits (layers 1..6): {}/{probed} with higher hierarchical cost {off:?}", off.len()),
    };
    (gating, report)
}

fn evc_tiling() -> Outcome {
    let n = 12;
    let shape = ClusterShape::flat(4).unwrap();
    let terms = gen_synthetic_jw(n, 0);
    let plan = PauliTilePlan::build(&terms, n, shape, true, 1).unwrap();
    let qrs = plan.qr_counts().total;
    let baseline = index_order_baseline(&terms, n, shape).unwrap().qr_count();
    let ratio = baseline as f64 / qrs.max(1) as f64;

    // tile counts with and without diagonalization; a term that cannot be
    // tiled counts as unbounded
    let count = |t: &[PauliTerm], n: usize, n_local: usize, diag: bool| {
        tiling_pauli_strings(&merge_terms(t, diag), n, n_local).map(|x| x.len()).unwrap_or(usize::MAX)
    };
    let mut mono_fail = 0;
    let mut strict_fail = 0;
    let mut inputs = 0;
    for jn in [8usize, 10, 12] {
        for p in [2usize, 4] {
            let t = gen_synthetic_jw(jn, 1);
            let nl = ClusterShape::flat(p).unwrap().n_local(jn).unwrap();
            let (on, off) = (count(&t, jn, nl, true), count(&t, jn, nl, false));
            inputs += 1;
            mono_fail += usize::from(on > off);
            strict_fail += usize::from(on >= off);
        }
    }
    for seed in 0..100u64 {
        let n = 4 + (seed % 7) as usize;
        let nl = 2 + (seed % 4) as usize;
        let t = gen_random_terms(n, 30, 5, seed);
        inputs += 1;
        mono_fail += usize::from(count(&t, n, nl.min(n), true) > count(&t, n, nl.min(n), false));
    }
    Outcome::gate(
        qrs <= 5 && ratio >= 20.0 && mono_fail == 0 && strict_fail == 0,
        format!(
            "JW n=12 p=4: {} tiles, {qrs} QRs (<= 5), baseline {baseline}, ratio {ratio:.1} (>= 20); monotonicity violations {mono_fail}/{inputs}, non-strict on JW {strict_fail}",
            plan.tiles.len()
        ),
    )
}

fn invariance(audit: &mut VolumeAudit) -> Outcome {
    // flatten before and after random reorderings
    let mut flatten_fail = 0;
    let mut events = 0;
    for seed in 0..40u64 {
        let n = 4 + (seed % 7) as usize;
        let shape = [ClusterShape::flat(2), ClusterShape::flat(4), ClusterShape::new(2, 2), ClusterShape::new(2, 4)]
            [(seed % 4) as usize]
            .clone()
            .unwrap();
        if shape.n_global() >= n {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = ReferenceState::random(n, &mut rng);
        let mut st = DistributedState::from_amplitudes(start.amplitudes(), shape).unwrap();
        for _ in 0..5 {
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(&mut rng);
            let nl = st.layout().n_local();
            let local: QubitSet = qs[..nl].iter().collect();
            let intra: QubitSet = qs[nl..nl + shape.n_intra()].iter().collect();
            if let Ok(e) = QrEvent::transition(st.layout(), local, Some(intra)) {
                st.perform_qr(&e).unwrap();
                events += 1;
                if st.flatten() != start {
                    flatten_fail += 1;
                }
            }
        }
        audit.record(&st);
    }

    // energies across PE counts
    let mut energy_spread: f64 = 0.0;
    let mut energy_fail = 0;
    for (n, layers) in [(8usize, 2usize), (10, 1)] {
        let c = gen_gatefabric(&GateFabricSpec { n, layers, seed: 31 }).unwrap();
        let d = build_dependency_graph(&c);
        let terms = gen_synthetic_jw(n, 6);
        let mut es = Vec::new();
        for p in [1usize, 2, 4, 8] {
            let shape = ClusterShape::flat(p).unwrap();
            let sc = flat_tiling(&c, &d, shape).unwrap();
            let plan = PauliTilePlan::build(&terms, n, shape, true, 1).unwrap();
            let mut st = DistributedState::zero(n, shape).unwrap();
            st.run_qsu(&c, &sc).unwrap();
            es.push(st.expectation(&plan, &terms).unwrap().value.re);
            audit.record(&st);
            // the convenience wrapper runs the same pipeline
            if evaluate_energy(&c, &sc, &terms, &plan, shape).unwrap().to_bits() != es.last().unwrap().to_bits() {
                energy_fail += 1;
            }
        }
        for &e in &es {
            energy_spread = energy_spread.max((e - es[0]).abs());
            if !energy_ok(e, es[0]) {
                energy_fail += 1;
            }
        }
    }

    // partitioned search against the serial tiler
    let mut partition_fail = 0;
    let mut plans = 0;
    let mut inputs: Vec<(Vec<PauliTerm>, usize, usize)> = vec![(gen_synthetic_jw(12, 0), 12, 10)];
    inputs.extend((0..20u64).map(|s| (gen_random_terms(10, 40, 4, s), 10, 4 + (s % 4) as usize)));
    for (terms, n, nl) in &inputs {
        let groups = merge_terms(terms, true);
        let serial = tiling_pauli_strings(&groups, *n, *nl).unwrap();
        let shape = ClusterShape::flat(1 << (n - nl)).unwrap();
        let serial_json = PauliTilePlan::new(serial.clone(), *n, shape, true).unwrap().to_json();
        for w in [1usize, 2, 4, 8] {
            let part = partitioned_tile_search(&groups, *n, *nl, w).unwrap();
            plans += 1;
            if part != serial || PauliTilePlan::new(part, *n, shape, true).unwrap().to_json() != serial_json {
                partition_fail += 1;
            }
        }
    }
    Outcome::gate(
        flatten_fail == 0 && energy_fail == 0 && partition_fail == 0,
        format!(
            "flatten changed after {flatten_fail}/{events} QRs; energy spread over p {energy_spread:.1e} ({energy_fail} failures); partitioned != serial in {partition_fail}/{plans} plans"
        ),
    )
}

fn complexity() -> Outcome {
    let shape = ClusterShape::flat(16).unwrap();
    let ms = [1_000usize, 10_000, 100_000];
    let times: Vec<f64> = ms
        .iter()
        .map(|&m| {
            let c = gen_random_circuit(24, m, 3, 7, false).unwrap();
            let d = build_dependency_graph(&c);
            (0..9)
                .map(|_| {
                    let t = Instant::now();
                    std::hint::black_box(flat_tiling(&c, &d, shape).unwrap());
                    t.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    // least-squares slope in log-log space
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();

    let terms = gen_synthetic_jw(12, 0);
    let t = Instant::now();
    let plan = PauliTilePlan::build(&terms, 12, ClusterShape::flat(4).unwrap(), true, 1).unwrap();
    let jw = t.elapsed();
    Outcome::gate(
        slope <= MAX_SLOPE && jw < JW_TILING_BUDGET,
        format!(
            "flat tiling {:?} ms at m = 1e3/1e4/1e5, slope {slope:.3} (<= {MAX_SLOPE}); JW n=12 tiling {:.3} s for {} tiles (< {} s)",
            times.iter().map(|t| (t * 1e5).round() / 100.0).collect::<Vec<_>>(),
            jw.as_secs_f64(),
            plan.tiles.len(),
            JW_TILING_BUDGET.as_secs()
        ),
    )
}

fn cover_audit() -> Outcome {
    let mut gaps = Vec::new();
    for seed in 0..50u64 {
        let n = 4 + (seed % 5) as usize;
        let m = 6 + (seed % 7) as usize;
        let nl = 2 + (seed % 3) as usize;
        let terms = gen_random_terms(n, m, nl, 500 + seed);
        let groups = merge_terms(&terms, true);
        let greedy = tiling_pauli_strings(&groups, n, nl).unwrap().len();
        let exact = exact_min_tiles(&groups, n, nl).unwrap();
        if greedy != exact {
            gaps.push(format!("#{seed}: greedy {greedy} vs exact {exact}"));
        }
    }
    Outcome { pass: true, gating: false, detail: format!("50 term sets, {} with a gap {gaps:?}", gaps.len()) }
}

fn main() {
    let mut audit = VolumeAudit::default();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("oracle equivalence (QSU)", qsu_oracle(&mut audit)));
    results.push(("oracle equivalence (EVC)", evc_oracle(&mut audit)));
    results.push(("Fig. 6 reproduction", fig6()));
    results.push(("Fig. 8 reproduction", fig8()));
    results.push(("dominance suite", dominance()));
    let (h, h_report) = hierarchy();
    results.push(("hierarchy suite", h));
    results.push(("hierarchy probe", h_report));
    results.push(("EVC tiling suite", evc_tiling()));
    results.push(("invariance", invariance(&mut audit)));
    results.push((
        "data-volume accounting",
        Outcome::gate(
            audit.qrs > 0 && audit.mismatches == 0,
            format!("{} executed QRs, {} mismatches against (1 - 2^-k) 2^n", audit.qrs, audit.mismatches),
        ),
    ));
    results.push(("scheduler complexity", complexity()));
    results.push(("small-instance cover audit", cover_audit()));

    let mut failed = 0;
    for (name, o) in &results {
        let tag = match (o.pass, o.gating) {
            (true, true) => "PASS",
            (false, true) => "FAIL",
            (_, false) => "INFO",
        };
        if o.gating && !o.pass {
            failed += 1;
        }
        println!("{tag} {name}: {}", o.detail);
    }
    println!("acceptance: {} gating criteria, {failed} failed", results.iter().filter(|(_, o)| o.gating).count());
    if failed > 0 {
        std::process::exit(1);
    }
}
