use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{StateVector, C64};
use crate::error::{CcrError, Result};

/// Square matrix stored by diagonals. A diagonal with offset `d` holds the
/// entries `(r, r + d)`; its `t`-th value sits in row `t + max(0, -d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    dim: usize,
    diagonals: Vec<(isize, Vec<C64>)>,
}

fn diag_len(dim: usize, offset: isize) -> usize {
    dim.saturating_sub(offset.unsigned_abs())
}

impl BandedMatrix {
    /// Diagonals with a repeated offset are summed.
    pub fn new(dim: usize, diagonals: Vec<(isize, Vec<C64>)>) -> Result<Self> {
        if dim == 0 {
            return Err(CcrError::InvalidParameter("banded matrix of dimension 0".into()));
        }
        let mut merged: BTreeMap<isize, Vec<C64>> = BTreeMap::new();
        for (offset, values) in diagonals {
            let len = diag_len(dim, offset);
            if len == 0 || values.len() != len {
                return Err(CcrError::InvalidParameter(format!(
                    "diagonal {offset} of a {dim}x{dim} matrix needs {len} values, got {}",
                    values.len()
                )));
            }
            match merged.get_mut(&offset) {
                Some(existing) => existing.iter_mut().zip(values).for_each(|(a, b)| *a += b),
                None => {
                    merged.insert(offset, values);
                }
            }
        }
        Ok(Self {
            dim,
            diagonals: merged.into_iter().collect(),
        })
    }

    pub fn diagonal(values: Vec<C64>) -> Result<Self> {
        let dim = values.len();
        Self::new(dim, vec![(0, values)])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(dim, vec![(0, vec![C64::new(1.0, 0.0); dim])])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagonals(&self) -> &[(isize, Vec<C64>)] {
        &self.diagonals
    }

    /// Entry `(row, col)`; zero off the stored band.
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        let offset = col as isize - row as isize;
        self.diagonals
            .iter()
            .find(|(d, _)| *d == offset)
            .map(|(d, v)| v[row - (-d).max(0) as usize])
            .unwrap_or_default()
    }

    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|y| *y = C64::default());
        for (offset, values) in &self.diagonals {
            let row0 = (-offset).max(0) as usize;
            let col0 = offset.max(&0).unsigned_abs();
            let rows = &mut out[row0..row0 + values.len()];
            let cols = &x[col0..col0 + values.len()];
            for ((y, v), xi) in rows.iter_mut().zip(values).zip(cols) {
                *y += v * xi;
            }
        }
    }

    pub fn apply(&self, x: &StateVector) -> StateVector {
        let mut out = StateVector::zeros(self.dim);
        self.apply_into(x.as_slice(), out.as_mut_slice());
        out
    }

    pub fn adjoint(&self) -> Self {
        let diagonals = self
            .diagonals
            .iter()
            .map(|(d, v)| (-d, v.iter().map(|z| z.conj()).collect()))
            .collect();
        Self::new(self.dim, diagonals).expect("adjoint of a valid band")
    }

    pub fn scaled(&self, a: C64) -> Self {
        Self {
            dim: self.dim,
            diagonals: self
                .diagonals
                .iter()
                .map(|(d, v)| (*d, v.iter().map(|z| a * z).collect()))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut diagonals = self.diagonals.clone();
        diagonals.extend(other.diagonals.iter().cloned());
        Self::new(self.dim, diagonals)
    }

    pub fn normalized_trace(&self) -> C64 {
        self.diagonals
            .iter()
            .find(|(d, _)| *d == 0)
            .map(|(_, v)| v.iter().sum::<C64>() / self.dim as f64)
            .unwrap_or_default()
    }

    pub fn hs_norm_sqr(&self) -> f64 {
        self.diagonals
            .iter()
            .flat_map(|(_, v)| v.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            / self.dim as f64
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, C64::default());
        for (offset, values) in &self.diagonals {
            let row0 = (-offset).max(0) as usize;
            let col0 = offset.max(&0).unsigned_abs();
            for (t, v) in values.iter().enumerate() {
                m[(row0 + t, col0 + t)] += v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn layout_and_entries() {
        // [[1, 2, 0], [4, 1, 3], [0, 5, 1]]
        let b = BandedMatrix::new(
            3,
            vec![(0, vec![r(1.0); 3]), (1, vec![r(2.0), r(3.0)]), (-1, vec![r(4.0), r(5.0)])],
        )
        .unwrap();
        assert_eq!(b.entry(0, 1), r(2.0));
        assert_eq!(b.entry(1, 2), r(3.0));
        assert_eq!(b.entry(1, 0), r(4.0));
        assert_eq!(b.entry(2, 1), r(5.0));
        assert_eq!(b.entry(0, 2), r(0.0));
        let x = StateVector::from_vec(vec![r(1.0), r(1.0), r(1.0)]).unwrap();
        assert_eq!(b.apply(&x).as_slice(), &[r(3.0), r(8.0), r(6.0)]);
        assert_eq!(b.adjoint().entry(1, 0), r(2.0));
    }

    #[test]
    fn corner_diagonal() {
        // single entry at (0, 3)
        let b = BandedMatrix::new(4, vec![(3, vec![r(7.0)])]).unwrap();
        assert_eq!(b.to_dense()[(0, 3)], r(7.0));
        assert_eq!(b.adjoint().to_dense()[(3, 0)], r(7.0));
    }

    #[test]
    fn bad_diagonal_lengths() {
        assert!(BandedMatrix::new(3, vec![(1, vec![r(1.0)])]).is_err());
        assert!(BandedMatrix::new(3, vec![(3, vec![])]).is_err());
        assert!(BandedMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn repeated_offsets_merge() {
        let b = BandedMatrix::new(2, vec![(0, vec![r(1.0), r(2.0)]), (0, vec![r(1.0), r(1.0)])]).unwrap();
        assert_eq!(b.diagonals().len(), 1);
        assert_eq!(b.entry(1, 1), r(3.0));
    }
}
