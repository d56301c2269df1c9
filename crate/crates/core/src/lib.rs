//! Finite-dimensional operator families whose commutators approach the
//! canonical commutation relation `[Q, P] = i` on designated subspaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: state vectors, dense / banded / Pauli-sum operators, norms.
//! * [`weyl`]: clock-and-shift canonical pairs and the finite Heisenberg group.
//! * [`spin`]: the `(p+1)`-dimensional spin irrep and spin coherent states.
//! * [`clifford`]: Pauli-tensor gamma matrices and the spin representation of `so(n)`.
//! * [`parafermi`]: Green-ansatz parafermi oscillators of finite order.
//! * [`sweep`]: configurable parameter sweeps, defect records and reports.

pub mod clifford;
pub mod error;
pub mod linalg;
pub mod parafermi;
pub mod spin;
pub mod sweep;
pub mod weyl;

pub use error::{CcrError, Result};
pub use linalg::{LinearOperator, PauliLabel, PauliString, StateVector, C64};
