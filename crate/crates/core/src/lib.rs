//! Simulation and mitigation of correlated quantum readout errors.
//!
//! The crate models readout noise as a continuous-time Markov process
//! (CTMP): the assignment matrix is `A = exp(G)` where `G` is a sum of
//! single- and two-qubit flip generators with nonnegative rates. On top of
//! that model it provides
//!
//! - an exact, seeded statevector simulator for small circuits
//!   ([`statevector`]),
//! - Pauli-string algebra, fermion-to-qubit mappings, and Fermi-Hubbard
//!   Hamiltonians ([`pauli`], [`fermion`], [`hubbard`]),
//! - calibration-circuit generation, generator-rate fitting, and the signed
//!   Monte-Carlo estimator that applies `A^-1` to measured expectation
//!   values ([`calibration`], [`mitigation`]),
//! - VQE objective evaluation under noiseless / noisy / mitigated modes,
//!   sweeps, and random-parameter sampling experiments ([`vqe`]),
//! - characterization of fitted rates against device connectivity
//!   ([`characterization`]).

pub mod calibration;
pub mod characterization;
pub mod error;
pub mod fermion;
pub mod grouping;
pub mod hubbard;
pub mod linalg;
pub mod mitigation;
pub mod model;
pub mod noise;
pub mod pauli;
pub mod profiles;
pub mod rng;
pub mod spectrum;
pub mod statevector;
pub mod vqe;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
