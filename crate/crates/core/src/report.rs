//! Batch driver behind the `qrtile` binary: option resolution and the
//! `schedule`, `simulate`, `evc` and `bench` commands.
//!
//! Options come from the command line, then from a `key=value` config file
//! (`--config`), then from defaults. Config keys are the long flag names.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::circuit::{build_dependency_graph, Circuit};
use crate::error::{Error, Result};
use crate::evc::{index_order_baseline, PauliTilePlan};
use crate::layout::{ClusterShape, CostWeights};
use crate::models::{fixture, gatefabric_targets, gen_synthetic_jw, parse_circuit, parse_hamiltonian};
use crate::pauli::PauliTerm;
use crate::qsu::SchedulerKind;
use crate::schedule::{count_qrs, Schedule};
use crate::sim::{with_workers, write_dump, DistributedState, ReferenceState};

/// Max amplitude error accepted by `simulate --verify`.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Relative energy error accepted by `evc --verify`, scaled by `1 + |E|`.
pub const ENERGY_TOLERANCE: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "qrtile", version, about = "Schedule and emulate distributed state-vector simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    Schedule,
    Simulate,
    Evc,
    Bench,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Schedule a circuit and report QR counts and cost.
    Schedule(Opts),
    /// Execute a schedule on the emulated PEs and dump the final state.
    Simulate(Opts),
    /// Tile a Hamiltonian and compute its expectation value.
    Evc(Opts),
    /// Sweep GateFabric sizes and emit one CSV row per configuration.
    Bench(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum StateInit {
    #[default]
    Zero,
    Random,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    /// `key=value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Use the synthetic Jordan-Wigner Hamiltonian on this many qubits.
    #[arg(long)]
    pub jw: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub gpn: Option<usize>,
    #[arg(long)]
    pub scheduler: Option<SchedulerKind>,
    /// Comma-separated schedulers to compare; bare flag compares all.
    #[arg(long, num_args = 0..=1, default_missing_value = "flat,hierarchical,adhoc")]
    pub compare: Option<String>,
    #[arg(long)]
    pub diagonalize: Option<OnOff>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Intra and inter QR weights, `wi,we`.
    #[arg(long)]
    pub weights: Option<CostWeights>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Qubit counts for `bench`, comma-separated.
    #[arg(long)]
    pub sweep: Option<String>,
    /// GateFabric layers for `bench`: a count, or `<k>n` for k layers per qubit.
    #[arg(long)]
    pub layers: Option<String>,
    /// Initial state for `evc` without a circuit.
    #[arg(long)]
    pub state: Option<StateInit>,
}

impl FromStr for CostWeights {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("weights must be `wi,we`, got `{s}`"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        CostWeights::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    }
}

/// GateFabric depth for a sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerRule {
    Fixed(usize),
    PerQubit(usize),
}

impl LayerRule {
    pub fn layers(self, n: usize) -> usize {
        match self {
            LayerRule::Fixed(l) => l,
            LayerRule::PerQubit(k) => k * n,
        }
    }
}

impl FromStr for LayerRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("layers must be a count or `<k>n`, got `{s}`"));
        match s.strip_suffix('n') {
            Some("") => Ok(LayerRule::PerQubit(1)),
            Some(k) => k.parse().map(LayerRule::PerQubit).map_err(|_| bad()),
            None => s.parse().map(LayerRule::Fixed).map_err(|_| bad()),
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Config(format!("bad list item `{t}`"))))
        .collect()
}

/// Fully resolved options.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub fixture: Option<String>,
    pub circuit: Option<PathBuf>,
    pub hamiltonian: Option<PathBuf>,
    pub jw: Option<usize>,
    pub p: Option<usize>,
    pub nodes: Option<usize>,
    pub gpn: Option<usize>,
    pub scheduler: SchedulerKind,
    pub compare: Vec<SchedulerKind>,
    pub diagonalize: bool,
    pub workers: usize,
    pub weights: CostWeights,
    pub seed: Option<u64>,
    pub verify: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub sweep: Vec<usize>,
    pub layers: LayerRule,
    pub state: StateInit,
}

fn parse_config_file(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key=value, got `{line}`") })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: FromStr>(file: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    file.get(key)
        .map(|v| v.parse().map_err(|_| Error::Config(format!("config key `{key}`: cannot parse `{v}`"))))
        .transpose()
}

fn on_off(s: &str) -> Result<bool> {
    match s {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(Error::Config(format!("expected on or off, got `{s}`"))),
    }
}

impl RunConfig {
    /// Merges command-line options over the config file text, if any.
    pub fn resolve(cli: &Opts, file_text: Option<&str>) -> Result<Self> {
        Self::resolve_with(cli, file_text, Format::Json)
    }

    /// As [`RunConfig::resolve`], with the output format used when neither
    /// source sets one.
    pub fn resolve_with(cli: &Opts, file_text: Option<&str>, default_format: Format) -> Result<Self> {
        const KEYS: [&str; 20] = [
            "fixture", "circuit", "hamiltonian", "jw", "p", "nodes", "gpn", "scheduler", "compare", "diagonalize",
            "workers", "weights", "seed", "verify", "out", "format", "sweep", "layers", "state", "config",
        ];
        let file = match file_text {
            Some(t) => parse_config_file(t)?,
            None => HashMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown config key `{k}`")));
        }
        macro_rules! pick {
            ($field:ident) => {
                match &cli.$field {
                    Some(v) => Some(v.clone()),
                    None => from_file(&file, stringify!($field))?,
                }
            };
        }
        let diagonalize = match cli.diagonalize {
            Some(v) => v == OnOff::On,
            None => file.get("diagonalize").map(|v| on_off(v)).transpose()?.unwrap_or(true),
        };
        let verify = cli.verify || file.get("verify").map(|v| on_off(v)).transpose()?.unwrap_or(false);
        let format = match cli.format {
            Some(f) => Some(f),
            None => file.get("format").map(|v| Format::from_str(v, true).map_err(Error::Config)).transpose()?,
        };
        let state = match cli.state {
            Some(s) => Some(s),
            None => file.get("state").map(|v| StateInit::from_str(v, true).map_err(Error::Config)).transpose()?,
        };
        let compare: Option<String> = pick!(compare);
        let sweep: Option<String> = pick!(sweep);
        let layers: Option<String> = pick!(layers);
        let workers: Option<usize> = pick!(workers);
        Ok(RunConfig {
            fixture: pick!(fixture),
            circuit: pick!(circuit),
            hamiltonian: pick!(hamiltonian),
            jw: pick!(jw),
            p: pick!(p),
            nodes: pick!(nodes),
            gpn: pick!(gpn),
            scheduler: pick!(scheduler).unwrap_or(SchedulerKind::Flat),
            compare: compare.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
            diagonalize,
            workers: workers.unwrap_or(1).max(1),
            weights: pick!(weights).unwrap_or_default(),
            seed: pick!(seed),
            verify,
            out: pick!(out),
            format: format.unwrap_or(default_format),
            sweep: sweep.as_deref().map(parse_list).transpose()?.unwrap_or_else(|| vec![8, 12, 16]),
            layers: layers.as_deref().map(str::parse).transpose()?.unwrap_or(LayerRule::PerQubit(4)),
            state: state.unwrap_or_default(),
        })
    }

    /// Explicit `--nodes/--gpn` or `--p` win over the fixture's shape;
    /// without any of them the emulation runs on one PE.
    pub fn shape(&self, fallback: Option<ClusterShape>) -> Result<ClusterShape> {
        match (self.nodes, self.gpn, self.p) {
            (Some(nodes), Some(gpn), p) => {
                if p.is_some_and(|p| p != nodes * gpn) {
                    return Err(Error::Config(format!("--p {} disagrees with {nodes} nodes x {gpn} PEs", p.unwrap())));
                }
                ClusterShape::new(nodes, gpn)
            }
            (None, None, Some(p)) => ClusterShape::flat(p),
            (None, None, None) => Ok(fallback.unwrap_or(ClusterShape::flat(1)?)),
            _ => Err(Error::Config("--nodes and --gpn must be given together".into())),
        }
    }

    /// Schedulers to report: the primary one, then any compared ones.
    fn schedulers(&self) -> Vec<SchedulerKind> {
        let mut all = vec![self.scheduler];
        for &k in &self.compare {
            if !all.contains(&k) {
                all.push(k);
            }
        }
        all
    }
}

fn load_circuit(cfg: &RunConfig) -> Result<Option<(Circuit, Option<ClusterShape>)>> {
    match (&cfg.fixture, &cfg.circuit) {
        (Some(_), Some(_)) => Err(Error::Config("give either --fixture or --circuit, not both".into())),
        (Some(name), None) => {
            let f = fixture(name)?;
            Ok(Some((f.circuit, Some(f.shape))))
        }
        (None, Some(path)) => Ok(Some((parse_circuit(&std::fs::read_to_string(path)?)?, None))),
        (None, None) => Ok(None),
    }
}

fn require_circuit(cfg: &RunConfig) -> Result<(Circuit, Option<ClusterShape>)> {
    load_circuit(cfg)?.ok_or_else(|| Error::Config("a circuit is required (--fixture or --circuit)".into()))
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn metrics(kind: SchedulerKind, s: &Schedule, w: CostWeights, time_ms: f64) -> Value {
    let c = count_qrs(s);
    json!({
        "scheduler": kind.name(),
        "n_qr": c.total,
        "n_intra": c.intra,
        "n_inter": c.inter,
        "cost": c.cost(w),
        "tiles": s.tiles().len(),
        "tile_sizes": s.tiles().iter().map(|t| t.gates.len()).collect::<Vec<_>>(),
        "sched_time_ms": time_ms,
    })
}

fn csv_header() -> &'static str {
    "n,p,scheduler,n_qr,n_intra,n_inter,cost,sched_time_ms\n"
}

fn csv_row(n: usize, shape: ClusterShape, kind: SchedulerKind, s: &Schedule, w: CostWeights, ms: f64) -> String {
    let c = count_qrs(s);
    format!("{n},{},{kind},{},{},{},{},{ms:.3}\n", shape.p(), c.total, c.intra, c.inter, c.cost(w))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Returns whether every requested verification passed.
pub fn cmd_schedule(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let (circuit, fshape) = require_circuit(cfg)?;
    let shape = cfg.shape(fshape)?;
    let deps = build_dependency_graph(&circuit);
    let mut runs = Vec::new();
    for kind in cfg.schedulers() {
        let start = Instant::now();
        let s = kind.run(&circuit, &deps, shape)?;
        runs.push((kind, s, millis(start)));
    }
    let mut ok = true;
    if cfg.verify {
        for (_, s, _) in &runs {
            ok &= s.verify(&circuit, &deps).is_ok();
        }
    }
    let (kind, primary, ms) = &runs[0];
    if let Some(path) = &cfg.out {
        std::fs::write(path, primary.to_json())?;
    }
    match cfg.format {
        Format::Csv => {
            let mut text = csv_header().to_string();
            for (k, s, t) in &runs {
                text += &csv_row(circuit.n(), shape, *k, s, cfg.weights, *t);
            }
            out.write_all(text.as_bytes())?;
        }
        Format::Json => {
            let mut v = json!({
                "n": circuit.n(),
                "p": shape.p(),
                "nodes": shape.nodes(),
                "gpn": shape.gpn(),
                "n_local": shape.n_local(circuit.n())?,
                "gates": circuit.len(),
                "metrics": metrics(*kind, primary, cfg.weights, *ms),
                "schedule": serde_json::from_str::<Value>(&primary.to_json())?,
            });
            if runs.len() > 1 {
                v["compare"] = runs.iter().map(|(k, s, t)| metrics(*k, s, cfg.weights, *t)).collect();
            }
            if cfg.verify {
                v["verified"] = json!(ok);
            }
            emit(out, &v)?;
        }
    }
    Ok(ok)
}

pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let (mut circuit, fshape) = require_circuit(cfg)?;
    if !circuit.has_payloads() {
        match cfg.seed {
            Some(seed) => circuit.bind_random_payloads(seed),
            None => {
                let id = circuit.ops().iter().find(|op| op.is_gate() && op.payload().is_none()).map(|op| op.id());
                return Err(Error::MissingPayload(id.unwrap_or(0)));
            }
        }
    }
    let shape = cfg.shape(fshape)?;
    let deps = build_dependency_graph(&circuit);
    let schedule = cfg.scheduler.run(&circuit, &deps, shape)?;
    let mut state = DistributedState::zero(circuit.n(), shape)?;
    with_workers(cfg.workers, || state.run_qsu(&circuit, &schedule))?;
    let flat = state.flatten();
    if let Some(path) = &cfg.out {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_dump(&mut f, &flat, shape.p())?;
        f.flush()?;
    }
    let counts = count_qrs(&schedule);
    let mut v = json!({
        "n": circuit.n(),
        "p": shape.p(),
        "scheduler": cfg.scheduler.name(),
        "n_qr": counts.total,
        "n_intra": counts.intra,
        "n_inter": counts.inter,
        "relocated_amplitudes": state.qr_log().iter().map(|r| r.relocated).sum::<u128>().to_string(),
        "norm": state.norm(),
    });
    let mut ok = true;
    if cfg.verify {
        let mut oracle = ReferenceState::zero(circuit.n())?;
        oracle.run(&circuit)?;
        let err = flat.max_abs_diff(&oracle);
        ok = err <= STATE_TOLERANCE;
        v["max_error"] = json!(err);
        v["verified"] = json!(ok);
    }
    emit(out, &v)?;
    Ok(ok)
}

fn load_terms(cfg: &RunConfig, n: Option<usize>) -> Result<Vec<PauliTerm>> {
    match (&cfg.hamiltonian, cfg.jw) {
        (Some(_), Some(_)) => Err(Error::Config("give either --hamiltonian or --jw, not both".into())),
        (Some(path), None) => parse_hamiltonian(&std::fs::read_to_string(path)?, n),
        (None, Some(jw)) => {
            if n.is_some_and(|n| n != jw) {
                return Err(Error::Config(format!("--jw {jw} disagrees with the {}-qubit circuit", n.unwrap())));
            }
            Ok(gen_synthetic_jw(jw, cfg.seed.unwrap_or(0)))
        }
        (None, None) => Err(Error::Config("a Hamiltonian is required (--hamiltonian or --jw)".into())),
    }
}

pub fn cmd_evc(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let mut loaded = load_circuit(cfg)?;
    let terms = load_terms(cfg, loaded.as_ref().map(|(c, _)| c.n()))?;
    let n = match (&loaded, terms.first()) {
        (Some((c, _)), _) => c.n(),
        (None, Some(t)) => t.string.n(),
        (None, None) => return Err(Error::Config("empty Hamiltonian and no circuit".into())),
    };
    if let Some((c, _)) = &mut loaded {
        if !c.has_payloads() {
            let seed = cfg.seed.ok_or(Error::MissingPayload(0))?;
            c.bind_random_payloads(seed);
        }
    }
    let shape = cfg.shape(loaded.as_ref().and_then(|(_, s)| *s))?;
    let start = Instant::now();
    let plan = PauliTilePlan::build(&terms, n, shape, cfg.diagonalize, cfg.workers)?;
    let tiling_ms = millis(start);
    let baseline = index_order_baseline(&terms, n, shape)?;

    let (mut state, mut oracle) = match &loaded {
        Some((c, _)) => {
            let deps = build_dependency_graph(c);
            let schedule = cfg.scheduler.run(c, &deps, shape)?;
            let mut s = DistributedState::zero(n, shape)?;
            with_workers(cfg.workers, || s.run_qsu(c, &schedule))?;
            (s, cfg.verify.then(|| ReferenceState::zero(n).and_then(|mut r| r.run(c).map(|_| r))).transpose()?)
        }
        None => match cfg.state {
            StateInit::Zero => (DistributedState::zero(n, shape)?, None),
            StateInit::Random => {
                let r = ReferenceState::random(n, &mut ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0)));
                (DistributedState::from_amplitudes(r.amplitudes(), shape)?, Some(r))
            }
        },
    };
    if cfg.verify && oracle.is_none() {
        oracle = Some(ReferenceState::zero(n)?);
    }
    let report = with_workers(cfg.workers, || state.expectation(&plan, &terms))?;
    let counts = plan.qr_counts();
    let tiler = counts.total;
    let ratio = (tiler > 0).then(|| baseline.qr_count() as f64 / tiler as f64);
    let mut v = json!({
        "n": n,
        "p": shape.p(),
        "terms": terms.len(),
        "diagonalize": cfg.diagonalize,
        "tiles": plan.tiles.len(),
        "n_qr": tiler,
        "n_intra": counts.intra,
        "n_inter": counts.inter,
        "baseline_qr": baseline.qr_count(),
        "ratio": ratio,
        "lead_in": report.lead_in,
        "energy": {"re": report.value.re, "im": report.value.im},
        "sched_time_ms": tiling_ms,
    });
    let mut ok = true;
    if cfg.verify {
        let oracle = oracle.expect("oracle prepared when verifying");
        let want = oracle.expectation(&terms)?;
        let err = (report.value - want).norm();
        ok = err <= ENERGY_TOLERANCE * (1.0 + want.norm());
        v["oracle_energy"] = json!({"re": want.re, "im": want.im});
        v["abs_error"] = json!(err);
        v["verified"] = json!(ok);
    }
    if let Some(path) = &cfg.out {
        std::fs::write(path, plan.to_json())?;
    }
    emit(out, &v)?;
    Ok(ok)
}

pub fn cmd_bench(cfg: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let schedulers = if cfg.compare.is_empty() { SchedulerKind::ALL.to_vec() } else { cfg.schedulers() };
    let mut rows = Vec::new();
    for &n in &cfg.sweep {
        let circuit = gatefabric_targets(n, cfg.layers.layers(n))?;
        let shape = cfg.shape(Some(ClusterShape::flat(4)?))?;
        let deps = build_dependency_graph(&circuit);
        for &kind in &schedulers {
            let start = Instant::now();
            let s = kind.run(&circuit, &deps, shape)?;
            rows.push((n, shape, kind, s, millis(start)));
        }
    }
    let text = match cfg.format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(n, shape, k, s, ms)| {
                    let mut m = metrics(*k, s, cfg.weights, *ms);
                    m["n"] = json!(n);
                    m["p"] = json!(shape.p());
                    m
                })
                .collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => {
            let mut text = csv_header().to_string();
            for (n, shape, k, s, ms) in &rows {
                let _ = write!(text, "{}", csv_row(*n, *shape, *k, s, cfg.weights, *ms));
            }
            text
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(true)
}

/// Runs one command. Returns whether every requested verification passed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let (kind, opts) = match &cli.command {
        Command::Schedule(o) => (CommandKind::Schedule, o),
        Command::Simulate(o) => (CommandKind::Simulate, o),
        Command::Evc(o) => (CommandKind::Evc, o),
        Command::Bench(o) => (CommandKind::Bench, o),
    };
    let file = opts.config.as_ref().map(std::fs::read_to_string).transpose()?;
    let default_format = if kind == CommandKind::Bench { Format::Csv } else { Format::Json };
    let cfg = RunConfig::resolve_with(opts, file.as_deref(), default_format)?;
    match kind {
        CommandKind::Schedule => cmd_schedule(&cfg, out),
        CommandKind::Simulate => cmd_simulate(&cfg, out),
        CommandKind::Evc => cmd_evc(&cfg, out),
        CommandKind::Bench => cmd_bench(&cfg, out),
    }
}

/// Process entry: 0 on success, 1 when a verification fails, 2 on usage or
/// runtime errors.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
