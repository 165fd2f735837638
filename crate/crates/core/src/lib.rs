//! Two-qubit noisy density-matrix simulator and spin-qubit characterization
//! toolkit.
//!
//! The crate is organized around the protocols used to characterize a pair of
//! gate-defined spin qubits:
//!
//! - [`algebra`]: density matrices, native gates with virtual-Z phase frames,
//!   Kraus channels, Pauli expectations, Monte Carlo sampling and parity
//!   projection.
//! - [`noise`]: depolarizing and relaxation channels, readout confusion
//!   matrices and the temperature presets shipped in `fixtures/`.
//! - [`clifford`]: the 24-element single-qubit Clifford group compiled to the
//!   native gate set, plus (feature `c2`) the two-qubit Clifford group.
//! - [`benchmarking`]: Clifford randomized benchmarking and interleaved
//!   character randomized benchmarking of CZ.
//! - [`tomography`]: Pauli-setting tomography, SPAM mitigation, maximum
//!   likelihood reconstruction and state metrics.
//! - [`experiments`]: Ramsey, echo, T1, Rabi chevrons, ALLXY, CZ phase
//!   calibration, heralded initialization and double readout.
//! - [`runner`]: config-driven runs that persist JSON records, CSV traces and
//!   SVG plots, and render markdown reports.
//!
//! # Qubit ordering
//!
//! Two-qubit basis states are labelled `|s1 s0>` with qubit 1 leftmost, so the
//! computational index of a basis state is `2 * s1 + s0`. Qubit index `0`
//! always refers to the least significant bit.

pub mod algebra;
pub mod benchmarking;
pub mod clifford;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod noise;
pub mod rng;
pub mod runner;
pub mod tomography;

pub use error::{Error, Result};

/// Version string recorded in every run record.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
