//! Python bindings: circuits, cluster shapes, the three QSU schedulers,
//! reordering counts, Hamiltonian tiling and energy evaluation.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qrtile::circuit::{build_dependency_graph, Circuit as CoreCircuit};
use qrtile::error::Error;
use qrtile::evc::{index_order_baseline, PauliTilePlan};
use qrtile::layout::{ClusterShape, CostWeights};
use qrtile::models::{
    fixture, gen_gatefabric, gen_random_circuit, gen_random_terms, gen_synthetic_jw, parse_circuit,
    parse_hamiltonian, serialize_circuit, serialize_hamiltonian, GateFabricSpec,
};
use qrtile::pauli::PauliTerm;
use qrtile::qsu::SchedulerKind;
use qrtile::schedule::{count_qrs, qr_cost, Schedule as CoreSchedule};
use qrtile::sim::{DistributedState, ReferenceState};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Shape", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct Shape(pub ClusterShape);

#[pymethods]
impl Shape {
    #[new]
    fn new(nodes: usize, gpn: usize) -> PyResult<Self> {
        ClusterShape::new(nodes, gpn).map(Shape).map_err(err)
    }

    /// `p` single-GPU nodes.
    #[staticmethod]
    fn flat(p: usize) -> PyResult<Self> {
        ClusterShape::flat(p).map(Shape).map_err(err)
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.0.nodes()
    }

    #[getter]
    fn gpn(&self) -> usize {
        self.0.gpn()
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    fn n_local(&self, n: usize) -> PyResult<usize> {
        self.0.n_local(n).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Shape(nodes={}, gpn={})", self.0.nodes(), self.0.gpn())
    }
}

#[pyclass(name = "Circuit", frozen)]
pub struct Circuit(pub CoreCircuit);

#[pymethods]
impl Circuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_circuit(text).map(Circuit).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, max_arity, seed, payloads = true))]
    fn random(n: usize, m: usize, max_arity: usize, seed: u64, payloads: bool) -> PyResult<Self> {
        gen_random_circuit(n, m, max_arity, seed, payloads).map(Circuit).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, layers, seed = 0))]
    fn gatefabric(n: usize, layers: usize, seed: u64) -> PyResult<Self> {
        gen_gatefabric(&GateFabricSpec { n, layers, seed }).map(Circuit).map_err(err)
    }

    /// A named reference circuit with the shape it is meant for.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<(Self, Shape)> {
        let f = fixture(name).map_err(err)?;
        Ok((Circuit(f.circuit), Shape(f.shape)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn targets(&self, id: usize) -> PyResult<Vec<usize>> {
        if id >= self.0.len() {
            return Err(PyValueError::new_err(format!("operator {id} out of range")));
        }
        Ok(self.0.op(id).targets().to_vec())
    }

    fn depths(&self) -> Vec<usize> {
        build_dependency_graph(&self.0).depths().to_vec()
    }

    fn to_text(&self) -> String {
        serialize_circuit(&self.0)
    }

    /// Final state from `|0...0>`, computed densely.
    fn reference_state(&self) -> PyResult<Vec<Complex64>> {
        let mut s = ReferenceState::zero(self.0.n()).map_err(err)?;
        s.run(&self.0).map_err(err)?;
        Ok(s.amplitudes().to_vec())
    }
}

#[pyclass(name = "Schedule", frozen)]
pub struct Schedule {
    inner: CoreSchedule,
    shape: ClusterShape,
    #[pyo3(get)]
    scheduler: String,
}

#[pymethods]
impl Schedule {
    #[getter]
    fn n_qr(&self) -> usize {
        count_qrs(&self.inner).total
    }

    #[getter]
    fn n_intra(&self) -> usize {
        count_qrs(&self.inner).intra
    }

    #[getter]
    fn n_inter(&self) -> usize {
        count_qrs(&self.inner).inter
    }

    #[getter]
    fn order(&self) -> Vec<usize> {
        self.inner.order().to_vec()
    }

    /// `(gate ids, local qubits)` per tile.
    #[getter]
    fn tiles(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.inner.tiles().iter().map(|t| (t.gates.clone(), t.local_qubits.to_vec())).collect()
    }

    /// Weighted reordering cost; the weights default to 1 and 24.
    #[pyo3(signature = (intra = None, inter = None))]
    fn cost(&self, intra: Option<f64>, inter: Option<f64>) -> PyResult<f64> {
        let d = CostWeights::default();
        let w = CostWeights::new(intra.unwrap_or(d.intra), inter.unwrap_or(d.inter)).map_err(err)?;
        Ok(qr_cost(&self.inner, w))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Runs the circuit under this schedule and returns the logical state.
    fn simulate(&self, circuit: &Circuit) -> PyResult<Vec<Complex64>> {
        let mut st = DistributedState::zero(circuit.0.n(), self.shape).map_err(err)?;
        st.run_qsu(&circuit.0, &self.inner).map_err(err)?;
        Ok(st.flatten().amplitudes().to_vec())
    }

    fn __repr__(&self) -> String {
        let c = count_qrs(&self.inner);
        format!("Schedule({}, tiles={}, n_qr={}, n_inter={})", self.scheduler, self.inner.tiles().len(), c.total, c.inter)
    }
}

/// Schedules a circuit with `flat`, `hierarchical` or `adhoc`.
#[pyfunction]
#[pyo3(signature = (circuit, shape, scheduler = "flat"))]
fn schedule(circuit: &Circuit, shape: Shape, scheduler: &str) -> PyResult<Schedule> {
    let kind: SchedulerKind = scheduler.parse().map_err(err)?;
    let deps = build_dependency_graph(&circuit.0);
    let inner = kind.run(&circuit.0, &deps, shape.0).map_err(err)?;
    Ok(Schedule { inner, shape: shape.0, scheduler: kind.name().to_string() })
}

#[pyclass(name = "Hamiltonian", frozen)]
pub struct Hamiltonian {
    terms: Vec<PauliTerm>,
    #[pyo3(get)]
    n: usize,
}

#[pymethods]
impl Hamiltonian {
    #[staticmethod]
    fn parse(text: &str, n: usize) -> PyResult<Self> {
        Ok(Hamiltonian { terms: parse_hamiltonian(text, Some(n)).map_err(err)?, n })
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn jordan_wigner(n: usize, seed: u64) -> Self {
        Hamiltonian { terms: gen_synthetic_jw(n, seed), n }
    }

    #[staticmethod]
    fn random(n: usize, m: usize, max_letters: usize, seed: u64) -> Self {
        Hamiltonian { terms: gen_random_terms(n, m, max_letters, seed), n }
    }

    fn __len__(&self) -> usize {
        self.terms.len()
    }

    fn to_text(&self) -> String {
        serialize_hamiltonian(&self.terms)
    }

    /// Index-order evaluation's reordering count, for comparison.
    fn baseline_qrs(&self, shape: Shape) -> PyResult<usize> {
        Ok(index_order_baseline(&self.terms, self.n, shape.0).map_err(err)?.qr_count())
    }

    /// Dense expectation value on the state a circuit prepares.
    fn reference_energy(&self, circuit: &Circuit) -> PyResult<Complex64> {
        let mut s = ReferenceState::zero(circuit.0.n()).map_err(err)?;
        s.run(&circuit.0).map_err(err)?;
        s.expectation(&self.terms).map_err(err)
    }
}

#[pyclass(name = "TilePlan", frozen)]
pub struct TilePlan {
    inner: PauliTilePlan,
    shape: ClusterShape,
}

#[pymethods]
impl TilePlan {
    #[getter]
    fn n_qr(&self) -> usize {
        self.inner.qr_counts().total
    }

    /// `(local qubits, term indices)` per tile.
    #[getter]
    fn tiles(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.inner.tiles.iter().map(|t| (t.local_qubits.to_vec(), t.terms.clone())).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Prepares the circuit's state under `schedule` and measures `h` tile by
    /// tile.
    fn energy(&self, circuit: &Circuit, schedule: &Schedule, h: &Hamiltonian) -> PyResult<Complex64> {
        let mut st = DistributedState::zero(circuit.0.n(), self.shape).map_err(err)?;
        st.run_qsu(&circuit.0, &schedule.inner).map_err(err)?;
        Ok(st.expectation(&self.inner, &h.terms).map_err(err)?.value)
    }
}

/// Greedy Pauli tiling of a Hamiltonian.
#[pyfunction]
#[pyo3(signature = (h, shape, diagonalize = true, workers = 1))]
fn tile_hamiltonian(h: &Hamiltonian, shape: Shape, diagonalize: bool, workers: usize) -> PyResult<TilePlan> {
    let inner = PauliTilePlan::build(&h.terms, h.n, shape.0, diagonalize, workers).map_err(err)?;
    Ok(TilePlan { inner, shape: shape.0 })
}

#[pymodule]
#[pyo3(name = "qrtile")]
pub fn qrtile_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Shape>()?;
    m.add_class::<Circuit>()?;
    m.add_class::<Schedule>()?;
    m.add_class::<Hamiltonian>()?;
    m.add_class::<TilePlan>()?;
    m.add_function(wrap_pyfunction!(schedule, m)?)?;
    m.add_function(wrap_pyfunction!(tile_hamiltonian, m)?)?;
    Ok(())
}
