use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::Rng;

use super::C64;
use crate::error::{CcrError, Result};

/// A complex state vector. The dimension is the length of the component
/// array; it is never zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<C64>,
}

impl StateVector {
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(CcrError::InvalidParameter(
                "state vector dimension must be positive".into(),
            ));
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "state vector dimension must be positive");
        Self {
            data: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(CcrError::IndexOutOfRange { index, bound: dim });
        }
        let mut v = Self::zeros(dim);
        v.data[index] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Uniformly random direction (components drawn from the unit square,
    /// then normalized).
    pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(dim);
        for z in v.data.iter_mut() {
            *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        v.normalized().expect("random vector is nonzero with probability one")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(CcrError::ZeroVector);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            data: self.data.iter().map(|z| a * z).collect(),
        }
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: C64, x: &Self) -> Result<()> {
        self.check_dim(x)?;
        for (y, xi) in self.data.iter_mut().zip(&x.data) {
            *y += a * xi;
        }
        Ok(())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Kronecker product `self ⊗ other`; `other` occupies the fast index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for StateVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

// The arithmetic operators panic on a dimension mismatch, like slice
// indexing does. Use `axpy`/`distance` for the checked forms.

impl Add for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: &StateVector) -> StateVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in add");
        StateVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: &StateVector) -> StateVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sub");
        StateVector {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &StateVector {
    type Output = StateVector;
    fn neg(self) -> StateVector {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<&StateVector> for C64 {
    type Output = StateVector;
    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scale(self)
    }
}

impl Mul<&StateVector> for f64 {
    type Output = StateVector;
    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scale(C64::new(self, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_dimension_rejected() {
        assert!(StateVector::from_vec(vec![]).is_err());
    }

    #[test]
    fn basis_and_norm() {
        let e = StateVector::basis(4, 2).unwrap();
        assert_eq!(e.norm(), 1.0);
        assert!(StateVector::basis(4, 4).is_err());
    }

    #[test]
    fn random_unit_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = StateVector::random_unit(17, &mut rng);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kron_of_basis_vectors() {
        let a = StateVector::basis(2, 1).unwrap();
        let b = StateVector::basis(3, 2).unwrap();
        let ab = a.kron(&b);
        assert_eq!(ab, StateVector::basis(6, 5).unwrap());
    }

    #[test]
    fn normalizing_zero_fails() {
        assert_eq!(StateVector::zeros(3).normalized(), Err(CcrError::ZeroVector));
    }
}
