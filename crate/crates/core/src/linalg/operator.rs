use nalgebra::DMatrix;

use super::{BandedMatrix, PauliSum, StateVector, C64, DENSIFY_CAP};
use crate::error::{CcrError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Dense(DMatrix<C64>),
    Banded(BandedMatrix),
    PauliSum(PauliSum),
}

/// A square linear operator on `C^dim` in one of three storage forms.
/// Immutable once built; application never mutates it.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    dim: usize,
    realization: Realization,
}

impl LinearOperator {
    pub fn dense(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(CcrError::InvalidParameter(format!(
                "dense operator must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self {
            dim: m.nrows(),
            realization: Realization::Dense(m),
        })
    }

    pub fn banded(b: BandedMatrix) -> Self {
        Self {
            dim: b.dim(),
            realization: Realization::Banded(b),
        }
    }

    pub fn pauli_sum(p: PauliSum) -> Self {
        Self {
            dim: p.dim(),
            realization: Realization::PauliSum(p),
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(Self::banded(BandedMatrix::identity(dim)?))
    }

    pub fn diagonal(values: Vec<C64>) -> Result<Self> {
        Ok(Self::banded(BandedMatrix::diagonal(values)?))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn as_pauli_sum(&self) -> Option<&PauliSum> {
        match &self.realization {
            Realization::PauliSum(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_banded(&self) -> Option<&BandedMatrix> {
        match &self.realization {
            Realization::Banded(b) => Some(b),
            _ => None,
        }
    }

    fn check_state(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    fn check_operator(&self, other: &Self) -> Result<()> {
        if other.dim != self.dim {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &StateVector) -> Result<StateVector> {
        self.check_state(x)?;
        Ok(match &self.realization {
            Realization::Dense(m) => {
                let mut out = StateVector::zeros(self.dim);
                for (r, y) in out.as_mut_slice().iter_mut().enumerate() {
                    *y = m
                        .row(r)
                        .iter()
                        .zip(x.as_slice())
                        .map(|(a, b)| a * b)
                        .sum();
                }
                out
            }
            Realization::Banded(b) => b.apply(x),
            Realization::PauliSum(p) => p.apply(x),
        })
    }

    /// Applies the operator `n` times.
    pub fn apply_power(&self, x: &StateVector, n: usize) -> Result<StateVector> {
        self.check_state(x)?;
        let mut v = x.clone();
        for _ in 0..n {
            v = self.apply(&v)?;
        }
        Ok(v)
    }

    pub fn adjoint(&self) -> Self {
        let realization = match &self.realization {
            Realization::Dense(m) => Realization::Dense(m.adjoint()),
            Realization::Banded(b) => Realization::Banded(b.adjoint()),
            Realization::PauliSum(p) => Realization::PauliSum(p.adjoint()),
        };
        Self {
            dim: self.dim,
            realization,
        }
    }

    pub fn scaled(&self, a: C64) -> Self {
        let realization = match &self.realization {
            Realization::Dense(m) => Realization::Dense(m * a),
            Realization::Banded(b) => Realization::Banded(b.scaled(a)),
            Realization::PauliSum(p) => Realization::PauliSum(p.scaled(a)),
        };
        Self {
            dim: self.dim,
            realization,
        }
    }

    /// Sum of two operators. Mixed realizations are combined densely, which
    /// requires `dim <= DENSIFY_CAP`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_operator(other)?;
        let realization = match (&self.realization, &other.realization) {
            (Realization::Banded(a), Realization::Banded(b)) => Realization::Banded(a.plus(b)?),
            (Realization::PauliSum(a), Realization::PauliSum(b)) => {
                Realization::PauliSum(a.plus(b)?)
            }
            _ => Realization::Dense(self.to_dense()? + other.to_dense()?),
        };
        Ok(Self {
            dim: self.dim,
            realization,
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(C64::new(-1.0, 0.0)))
    }

    /// Dense copy; refused above [`DENSIFY_CAP`].
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        if self.dim > DENSIFY_CAP {
            return Err(CcrError::ResourceCap {
                what: format!("densifying a {0}x{0} operator", self.dim),
                required_bytes: (self.dim as u128).pow(2) * 16,
                budget_bytes: (DENSIFY_CAP as u128).pow(2) * 16,
            });
        }
        Ok(match &self.realization {
            Realization::Dense(m) => m.clone(),
            Realization::Banded(b) => b.to_dense(),
            Realization::PauliSum(p) => p.to_dense(),
        })
    }

    pub fn densified(&self) -> Result<Self> {
        Self::dense(self.to_dense()?)
    }

    /// Largest modulus of `(A - A^dagger) x` over the given vectors.
    pub fn hermiticity_defect(&self, vectors: &[StateVector]) -> Result<f64> {
        let adj = self.adjoint();
        let mut worst: f64 = 0.0;
        for x in vectors {
            worst = worst.max(self.apply(x)?.distance(&adj.apply(x)?)?);
        }
        Ok(worst)
    }
}

/// `A (B x) - B (A x)`, without forming `AB`.
pub fn commutator_apply(a: &LinearOperator, b: &LinearOperator, x: &StateVector) -> Result<StateVector> {
    a.check_operator(b)?;
    let abx = a.apply(&b.apply(x)?)?;
    let bax = b.apply(&a.apply(x)?)?;
    Ok(&abx - &bax)
}

/// `A (B x) + B (A x)`.
pub fn anticommutator_apply(
    a: &LinearOperator,
    b: &LinearOperator,
    x: &StateVector,
) -> Result<StateVector> {
    a.check_operator(b)?;
    let abx = a.apply(&b.apply(x)?)?;
    let bax = b.apply(&a.apply(x)?)?;
    Ok(&abx + &bax)
}

/// `[A, [B, C]] x`.
pub fn nested_commutator_apply(
    a: &LinearOperator,
    b: &LinearOperator,
    c: &LinearOperator,
    x: &StateVector,
) -> Result<StateVector> {
    let inner = commutator_apply(b, c, x)?;
    let outer = a.apply(&inner)?;
    let ax = a.apply(x)?;
    let inner_a = commutator_apply(b, c, &ax)?;
    Ok(&outer - &inner_a)
}

/// Kronecker product `A ⊗ B` (B on the fast index). Both operators must be
/// dense, or both Pauli sums.
pub fn kron(a: &LinearOperator, b: &LinearOperator) -> Result<LinearOperator> {
    match (&a.realization, &b.realization) {
        (Realization::Dense(x), Realization::Dense(y)) => {
            if x.nrows() * y.nrows() > DENSIFY_CAP {
                return Err(CcrError::ResourceCap {
                    what: "dense Kronecker product".into(),
                    required_bytes: ((x.nrows() * y.nrows()) as u128).pow(2) * 16,
                    budget_bytes: (DENSIFY_CAP as u128).pow(2) * 16,
                });
            }
            LinearOperator::dense(x.kronecker(y))
        }
        (Realization::PauliSum(x), Realization::PauliSum(y)) => {
            Ok(LinearOperator::pauli_sum(x.kron(y)?))
        }
        _ => Err(CcrError::IncompatibleRealizations(
            "kron needs two dense operators or two Pauli sums".into(),
        )),
    }
}
