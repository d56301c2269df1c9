//! Complex linear algebra substrate shared by every operator family.

mod banded;
mod norms;
mod operator;
mod pauli;
mod state;

pub use banded::BandedMatrix;
pub use norms::{hs_norm, normalized_trace, operator_norm, operator_norm_with, PowerIteration};
pub use operator::{
    anticommutator_apply, commutator_apply, kron, nested_commutator_apply, LinearOperator,
    Realization,
};
pub use pauli::{PauliLabel, PauliString, PauliSum, MAX_SITES};
pub use state::StateVector;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type C64 = num_complex::Complex64;

/// Largest dimension for which operators are materialized as dense matrices.
pub const DENSIFY_CAP: usize = 4096;

/// Seed for every internally generated random vector.
pub const DEFAULT_SEED: u64 = 0x5EED;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` random unit vectors drawn from a generator seeded with `seed`.
pub fn random_unit_vectors(dim: usize, count: usize, seed: u64) -> Vec<StateVector> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| StateVector::random_unit(dim, &mut rng)).collect()
}

/// Returns the imaginary unit times `x`.
#[inline]
pub fn i_times(x: f64) -> C64 {
    C64::new(0.0, x)
}
