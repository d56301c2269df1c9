use super::{seeded_rng, LinearOperator, Realization, StateVector, C64, DEFAULT_SEED};
use crate::error::{CcrError, Result};

/// Operators up to this dimension get their norm from a full SVD.
pub const EXACT_NORM_CAP: usize = 512;

/// Settings for the power iteration on `A^dagger A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Skip the SVD shortcut even for small operators.
    pub iterative_only: bool,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 10_000,
            seed: DEFAULT_SEED,
            iterative_only: false,
        }
    }
}

/// Largest singular value of `a`, to relative accuracy `tol`.
pub fn operator_norm(a: &LinearOperator, tol: f64) -> Result<f64> {
    operator_norm_with(
        a,
        PowerIteration {
            tol,
            ..PowerIteration::default()
        },
    )
}

pub fn operator_norm_with(a: &LinearOperator, settings: PowerIteration) -> Result<f64> {
    if !(settings.tol > 0.0) {
        return Err(CcrError::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            settings.tol
        )));
    }
    if a.dim() <= EXACT_NORM_CAP && !settings.iterative_only {
        let m = a.to_dense()?;
        return Ok(m.singular_values().max());
    }

    let adj = a.adjoint();
    let mut rng = seeded_rng(settings.seed);
    let mut x = StateVector::random_unit(a.dim(), &mut rng);
    let mut estimate = 0.0f64;
    let mut change = f64::INFINITY;
    for _ in 0..settings.max_iterations {
        let ax = a.apply(&x)?;
        let rayleigh = ax.norm_sqr();
        let y = adj.apply(&ax)?;
        let ny = y.norm();
        if ny == 0.0 {
            // x lies in the kernel of A^dagger A: either A = 0 or an unlucky
            // start; in both cases the current Rayleigh quotient is exact.
            return Ok(rayleigh.sqrt());
        }
        x = y.scale(C64::new(1.0 / ny, 0.0));
        let next = rayleigh.sqrt();
        change = (next - estimate).abs() / next.max(f64::MIN_POSITIVE);
        estimate = next;
        if change <= settings.tol {
            return Ok(estimate);
        }
    }
    Err(CcrError::NonConvergence {
        iterations: settings.max_iterations,
        last_change: change,
    })
}

/// `tau(A) = Tr(A) / dim`. Pauli sums are traced analytically.
pub fn normalized_trace(a: &LinearOperator) -> C64 {
    match a.realization() {
        Realization::Dense(m) => m.trace() / a.dim() as f64,
        Realization::Banded(b) => b.normalized_trace(),
        Realization::PauliSum(p) => p.normalized_trace(),
    }
}

/// Normalized Hilbert-Schmidt norm `sqrt(tau(A^dagger A))`.
pub fn hs_norm(a: &LinearOperator) -> f64 {
    match a.realization() {
        Realization::Dense(m) => m.norm() / (a.dim() as f64).sqrt(),
        Realization::Banded(b) => b.hs_norm_sqr().sqrt(),
        Realization::PauliSum(p) => p.hs_norm_sqr().sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{BandedMatrix, PauliLabel, PauliString, PauliSum};

    fn diag(values: &[f64]) -> LinearOperator {
        LinearOperator::diagonal(values.iter().map(|&v| C64::new(v, 0.0)).collect()).unwrap()
    }

    #[test]
    fn identity_and_diagonal_norms() {
        for dim in [1, 7, 600] {
            let id = LinearOperator::identity(dim).unwrap();
            assert!((operator_norm(&id, 1e-10).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((operator_norm(&diag(&[1.0, 2.0, 3.0]), 1e-10).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_path_agrees_with_svd() {
        let a = diag(&[1.0, -2.0, 3.0, 0.5]);
        let settings = PowerIteration {
            iterative_only: true,
            tol: 1e-13,
            ..PowerIteration::default()
        };
        let est = operator_norm_with(&a, settings).unwrap();
        assert!((est - 3.0).abs() < 1e-6, "{est}");
    }

    #[test]
    fn non_convergence_reported() {
        let a = diag(&[1.0, 0.999_999, 0.5]);
        let settings = PowerIteration {
            iterative_only: true,
            tol: 1e-300,
            max_iterations: 5,
            ..PowerIteration::default()
        };
        assert!(matches!(
            operator_norm_with(&a, settings),
            Err(CcrError::NonConvergence { iterations: 5, .. })
        ));
    }

    #[test]
    fn bad_tolerance_rejected() {
        assert!(operator_norm(&diag(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn traces_and_hs_norms() {
        let id = LinearOperator::identity(8).unwrap();
        assert_eq!(normalized_trace(&id), C64::new(1.0, 0.0));
        assert!((hs_norm(&id) - 1.0).abs() < 1e-15);

        let z = LinearOperator::pauli_sum(
            PauliSum::new(1, vec![PauliString::single(PauliLabel::Z, 1, 1).unwrap()]).unwrap(),
        );
        assert_eq!(normalized_trace(&z), C64::new(0.0, 0.0));
        assert!((hs_norm(&z) - 1.0).abs() < 1e-15);

        let zd = z.densified().unwrap();
        assert_eq!(normalized_trace(&zd), C64::new(0.0, 0.0));
        assert!((hs_norm(&zd) - 1.0).abs() < 1e-15);

        let b = LinearOperator::banded(BandedMatrix::new(2, vec![(1, vec![C64::new(2.0, 0.0)])]).unwrap());
        assert!((hs_norm(&b) - 2f64.sqrt()).abs() < 1e-15);
    }
}
