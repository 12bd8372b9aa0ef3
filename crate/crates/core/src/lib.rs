//! He ground-state energy by VQE on a four-qubit photonic-style ansatz.
//!
//! The pipeline runs electron integrals → second-quantized Hamiltonian →
//! Jordan-Wigner Pauli sum → statevector VQE. A separate mode-level model of
//! the interferometer computes Fock-state transition probabilities from
//! matrix permanents.

pub mod fermion;
pub mod integrals;
pub mod jw;
pub mod photonic;
pub mod qsim;
pub mod vqe;

#[cfg(test)]
pub(crate) mod testutil;

pub use num_complex::Complex64;
