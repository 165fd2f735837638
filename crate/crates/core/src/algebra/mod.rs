//! Exact density-matrix substrate shared by every protocol.

pub mod channel;
pub mod circuit;
pub mod gate;
pub mod linalg;
pub mod parity;
pub mod pauli;
pub mod sampling;
pub mod simulate;
pub mod state;

pub use channel::QuantumChannel;
pub use circuit::{bell_prep, Circuit, Layer};
pub use gate::{GateKind, GateTimes, NativeGate};
pub use linalg::CMatrix;
pub use parity::{project_parity, ParityProjection};
pub use pauli::{pauli_expectation, Pauli, PauliString};
pub use sampling::{multinomial, outcome_probabilities, sample_counts, Counts};
pub use simulate::{apply_circuit, apply_logical_unitary, circuit_unitary, logical_unitary, PhaseFrame};
pub use state::DensityMatrix;
