//! Generators, small reference fixtures, and file
//! formats.

mod generators;
mod text;

pub use generators::{
    gatefabric_block_count, gatefabric_targets, gen_gatefabric, gen_random_circuit, gen_random_terms,
    gen_synthetic_jw, synthetic_jw_term_count, GateFabricSpec,
};
pub use text::{parse_circuit, parse_hamiltonian, serialize_circuit, serialize_hamiltonian};

use crate::circuit::{Circuit, Operator};
use crate::error::{Error, Result};
use crate::layout::ClusterShape;

/// A named circuit with the cluster shape its figure uses.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub circuit: Circuit,
    pub shape: ClusterShape,
}

pub const FIXTURE_NAMES: [&str; 4] = ["fig2", "fig3", "fig7", "gatefabric-fig6"];

/// Seed for fixture payloads.
const FIXTURE_SEED: u64 = 0;

fn small(n: usize, gates: &[&[usize]]) -> Circuit {
    let ops = gates.iter().enumerate().map(|(id, t)| Operator::gate(id, t)).collect();
    let mut c = Circuit::new(n, ops).expect("fixture is valid");
    c.bind_random_payloads(FIXTURE_SEED);
    c
}

/// Fixture circuits carry seeded random payloads.
///
/// - `fig2`: dependencies exactly U0>U2, U1>U2, U2>U3, U2>U4.
/// - `fig3`: 4 qubits on 4 PEs; U0 and U3 act on `{0,1}`, the rest touch a
///   global qubit.
/// - `fig7`: 6 qubits on 4 PEs; the first tile under `{0,1,2,3}` holds U0,
///   U1, U3, U5 and one reordering to `{2,3,4,5}` finishes the circuit.
/// - `gatefabric-fig6`: 16 qubits, 6 layers (42 blocks), 16 PEs.
pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, circuit, shape) = match name {
        "fig2" => ("fig2", small(4, &[&[0], &[1], &[0, 1], &[0], &[1]]), ClusterShape::flat(4)?),
        "fig3" => ("fig3", small(4, &[&[0, 1], &[1, 2], &[0, 2], &[0, 1], &[2, 3]]), ClusterShape::flat(4)?),
        "fig7" | "fig7-style" => (
            "fig7",
            small(6, &[&[0, 1], &[2, 3], &[3, 4], &[0, 1], &[4, 5], &[1, 2], &[2, 3], &[4, 5]]),
            ClusterShape::flat(4)?,
        ),
        "gatefabric-fig6" => (
            "gatefabric-fig6",
            gen_gatefabric(&GateFabricSpec { n: 16, layers: 6, seed: FIXTURE_SEED })?,
            ClusterShape::flat(16)?,
        ),
        other => {
            return Err(Error::Config(format!("unknown fixture `{other}`; known: {}", FIXTURE_NAMES.join(", "))))
        }
    };
    Ok(Fixture { name, circuit, shape })
}
