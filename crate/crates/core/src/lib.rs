//! Scheduling and emulation of distributed state-vector quantum circuit
//! simulation.
//!
//! Circuits are scheduled so that gates run on local qubits only, with qubit
//! reorderings (QRs) between tiles; Hamiltonian terms are tiled the same way
//! for expectation values. The emulator executes schedules on `p` simulated
//! processing elements and is checked against a dense oracle.

pub mod circuit;
pub mod error;
pub mod evc;
pub mod layout;
pub mod models;
pub mod pauli;
pub mod qsu;
pub mod qubits;
pub mod report;
pub mod schedule;
pub mod sim;
pub mod unitary;
