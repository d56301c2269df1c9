//! Pauli strings and their sums, applied matrix-free on `2^M`-dimensional
//! spaces.
//!
//! Bit convention: basis index `n` stores site `k` (1-based) in bit `k - 1`,
//! so site 1 varies fastest. On each site `|0>` is the `sigma_3 = +1` state.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{StateVector, C64};
use crate::error::{CcrError, Result};

/// Largest site count accepted by [`PauliString`]; index masks are `u64`.
pub const MAX_SITES: usize = 62;

/// Below this dimension application runs on one thread.
const PARALLEL_MIN_DIM: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLabel {
    X,
    Y,
    Z,
    /// `sigma_+ = (sigma_1 + i sigma_2) / 2 = |0><1|`.
    Plus,
    /// `sigma_- = (sigma_1 - i sigma_2) / 2 = |1><0|`.
    Minus,
    /// `(1 + sigma_3) / 2 = |0><0|`.
    NumProj,
}

type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);
const IDENTITY2: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

impl PauliLabel {
    pub fn adjoint(self) -> Self {
        match self {
            PauliLabel::Plus => PauliLabel::Minus,
            PauliLabel::Minus => PauliLabel::Plus,
            other => other,
        }
    }

    /// 2x2 matrix, rows indexed by the output bit.
    pub fn matrix(self) -> Mat2 {
        match self {
            PauliLabel::X => [[ZERO, ONE], [ONE, ZERO]],
            PauliLabel::Y => [[ZERO, -I], [I, ZERO]],
            PauliLabel::Z => [[ONE, ZERO], [ZERO, -ONE]],
            PauliLabel::Plus => [[ZERO, ONE], [ZERO, ZERO]],
            PauliLabel::Minus => [[ZERO, ZERO], [ONE, ZERO]],
            PauliLabel::NumProj => [[ONE, ZERO], [ZERO, ZERO]],
        }
    }

    /// Expansion over `{I, X, Y, Z}`; `None` stands for the identity.
    fn pauli_expansion(self) -> Vec<(C64, Option<PauliLabel>)> {
        let half = C64::new(0.5, 0.0);
        match self {
            PauliLabel::X | PauliLabel::Y | PauliLabel::Z => vec![(ONE, Some(self))],
            PauliLabel::Plus => vec![(half, Some(PauliLabel::X)), (half * I, Some(PauliLabel::Y))],
            PauliLabel::Minus => vec![(half, Some(PauliLabel::X)), (-half * I, Some(PauliLabel::Y))],
            PauliLabel::NumProj => vec![(half, None), (half, Some(PauliLabel::Z))],
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
            PauliLabel::Plus => "+",
            PauliLabel::Minus => "-",
            PauliLabel::NumProj => "N",
        }
    }
}

/// Product of two single-site Paulis (`None` = identity): `(phase, label)`.
fn pauli_product(a: Option<PauliLabel>, b: Option<PauliLabel>) -> (C64, Option<PauliLabel>) {
    use PauliLabel::*;
    match (a, b) {
        (None, x) | (x, None) => (ONE, x),
        (Some(x), Some(y)) if x == y => (ONE, None),
        (Some(X), Some(Y)) => (I, Some(Z)),
        (Some(Y), Some(X)) => (-I, Some(Z)),
        (Some(Y), Some(Z)) => (I, Some(X)),
        (Some(Z), Some(Y)) => (-I, Some(X)),
        (Some(Z), Some(X)) => (I, Some(Y)),
        (Some(X), Some(Z)) => (-I, Some(Y)),
        _ => unreachable!("pauli_product called with a ladder label"),
    }
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[ZERO; 2]; 2];
    for (r, row) in c.iter_mut().enumerate() {
        for (col, entry) in row.iter_mut().enumerate() {
            *entry = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    c
}

fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// A coefficient times a tensor product of single-site labels on `M` sites.
/// Each basis state is sent to at most one basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    coefficient: C64,
    sites: Vec<(usize, PauliLabel)>,
    total_sites: usize,
    flip_mask: u64,
    sign_mask: u64,
    need_one: u64,
    need_zero: u64,
    phase: C64,
}

impl PauliString {
    pub fn new(
        coefficient: C64,
        sites: impl IntoIterator<Item = (usize, PauliLabel)>,
        total_sites: usize,
    ) -> Result<Self> {
        if total_sites == 0 || total_sites > MAX_SITES {
            return Err(CcrError::InvalidParameter(format!(
                "total sites must be in 1..={MAX_SITES}, got {total_sites}"
            )));
        }
        let mut sites: Vec<(usize, PauliLabel)> = sites.into_iter().collect();
        sites.sort_by_key(|&(k, _)| k);
        for w in sites.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CcrError::InvalidParameter(format!(
                    "site {} appears twice in a Pauli string",
                    w[0].0
                )));
            }
        }
        if let Some(&(k, _)) = sites.iter().find(|&&(k, _)| k == 0 || k > total_sites) {
            return Err(CcrError::IndexOutOfRange {
                index: k,
                bound: total_sites + 1,
            });
        }

        let (mut flip_mask, mut sign_mask, mut need_one, mut need_zero) = (0u64, 0u64, 0u64, 0u64);
        let mut phase = coefficient;
        for &(k, label) in &sites {
            let bit = 1u64 << (k - 1);
            match label {
                PauliLabel::X => flip_mask |= bit,
                PauliLabel::Y => {
                    flip_mask |= bit;
                    sign_mask |= bit;
                    phase *= I;
                }
                PauliLabel::Z => sign_mask |= bit,
                PauliLabel::Plus => {
                    flip_mask |= bit;
                    need_one |= bit;
                }
                PauliLabel::Minus => {
                    flip_mask |= bit;
                    need_zero |= bit;
                }
                PauliLabel::NumProj => need_zero |= bit,
            }
        }
        Ok(Self {
            coefficient,
            sites,
            total_sites,
            flip_mask,
            sign_mask,
            need_one,
            need_zero,
            phase,
        })
    }

    pub fn identity(total_sites: usize) -> Result<Self> {
        Self::new(ONE, [], total_sites)
    }

    /// A single label on one site.
    pub fn single(label: PauliLabel, site: usize, total_sites: usize) -> Result<Self> {
        Self::new(ONE, [(site, label)], total_sites)
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn sites(&self) -> &[(usize, PauliLabel)] {
        &self.sites
    }

    pub fn total_sites(&self) -> usize {
        self.total_sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_sites
    }

    pub fn label_at(&self, site: usize) -> Option<PauliLabel> {
        self.sites
            .binary_search_by_key(&site, |&(k, _)| k)
            .ok()
            .map(|i| self.sites[i].1)
    }

    pub fn scaled(&self, a: C64) -> Self {
        Self::new(self.coefficient * a, self.sites.iter().copied(), self.total_sites)
            .expect("scaling preserves validity")
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.coefficient.conj(),
            self.sites.iter().map(|&(k, l)| (k, l.adjoint())),
            self.total_sites,
        )
        .expect("adjoint preserves validity")
    }

    /// Moves every site up by `offset` and embeds in `total_sites` sites.
    pub fn shifted(&self, offset: usize, total_sites: usize) -> Result<Self> {
        Self::new(
            self.coefficient,
            self.sites.iter().map(|&(k, l)| (k + offset, l)),
            total_sites,
        )
    }

    /// Image of basis state `col`: `Some((row, amplitude))`, or `None` if the
    /// string annihilates it.
    #[inline]
    pub fn act_on_basis(&self, col: usize) -> Option<(usize, C64)> {
        let n = col as u64;
        if n & self.need_one != self.need_one || n & self.need_zero != 0 {
            return None;
        }
        let amp = if (n & self.sign_mask).count_ones() % 2 == 1 {
            -self.phase
        } else {
            self.phase
        };
        Some(((n ^ self.flip_mask) as usize, amp))
    }

    /// Adds `self * x` into `out`, restricted to output indices
    /// `offset..offset + out.len()`.
    #[inline]
    fn accumulate(&self, x: &[C64], out: &mut [C64], offset: usize) {
        let flip = self.flip_mask as usize;
        for (i, y) in out.iter_mut().enumerate() {
            let col = (offset + i) ^ flip;
            if let Some((_, amp)) = self.act_on_basis(col) {
                *y += amp * x[col];
            }
        }
    }

    /// `tau(self^dagger other)` with `tau` the normalized trace.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        if self.total_sites != other.total_sites {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut acc = self.coefficient.conj() * other.coefficient;
        let mut sites: Vec<usize> = self.sites.iter().chain(&other.sites).map(|&(k, _)| k).collect();
        sites.sort_unstable();
        sites.dedup();
        for k in sites {
            let a = self.label_at(k).map_or(IDENTITY2, PauliLabel::matrix);
            let b = other.label_at(k).map_or(IDENTITY2, PauliLabel::matrix);
            let m = mat2_mul(&mat2_adjoint(&a), &b);
            acc *= (m[0][0] + m[1][1]) * 0.5;
            if acc == ZERO {
                break;
            }
        }
        Ok(acc)
    }

    /// `tau(self)`: labels other than `NumProj` are traceless.
    pub fn normalized_trace(&self) -> C64 {
        let mut t = self.coefficient;
        for &(_, label) in &self.sites {
            match label {
                PauliLabel::NumProj => t *= 0.5,
                _ => return ZERO,
            }
        }
        t
    }

    /// Expansion as a sum of strings with only `X`, `Y`, `Z` labels.
    pub fn to_pauli_basis(&self) -> Vec<PauliString> {
        let mut terms: Vec<(C64, Vec<(usize, PauliLabel)>)> = vec![(self.coefficient, Vec::new())];
        for &(k, label) in &self.sites {
            let expansion = label.pauli_expansion();
            let mut next = Vec::with_capacity(terms.len() * expansion.len());
            for (c, labels) in &terms {
                for &(a, l) in &expansion {
                    let mut labels = labels.clone();
                    if let Some(l) = l {
                        labels.push((k, l));
                    }
                    next.push((c * a, labels));
                }
            }
            terms = next;
        }
        terms
            .into_iter()
            .map(|(c, labels)| Self::new(c, labels, self.total_sites).expect("valid expansion"))
            .collect()
    }

    fn is_pure_pauli(&self) -> bool {
        self.sites
            .iter()
            .all(|&(_, l)| matches!(l, PauliLabel::X | PauliLabel::Y | PauliLabel::Z))
    }

    /// Operator product `self * other` for strings carrying only `X`, `Y`,
    /// `Z` labels; the result is again a single string.
    pub fn mul_pauli(&self, other: &Self) -> Result<Self> {
        if self.total_sites != other.total_sites {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !self.is_pure_pauli() || !other.is_pure_pauli() {
            return Err(CcrError::InvalidParameter(
                "mul_pauli needs X/Y/Z labels only; expand with to_pauli_basis first".into(),
            ));
        }
        let mut coeff = self.coefficient * other.coefficient;
        let mut out = Vec::new();
        let mut sites: Vec<usize> = self.sites.iter().chain(&other.sites).map(|&(k, _)| k).collect();
        sites.sort_unstable();
        sites.dedup();
        for k in sites {
            let (ph, l) = pauli_product(self.label_at(k), other.label_at(k));
            coeff *= ph;
            if let Some(l) = l {
                out.push((k, l));
            }
        }
        Self::new(coeff, out, self.total_sites)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        if self.sites.is_empty() {
            return write!(f, " I");
        }
        for &(k, l) in &self.sites {
            write!(f, " {}{}", l.symbol(), k)?;
        }
        Ok(())
    }
}

/// A sum of Pauli strings on a common number of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    total_sites: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(total_sites: usize, terms: Vec<PauliString>) -> Result<Self> {
        if total_sites == 0 || total_sites > MAX_SITES {
            return Err(CcrError::InvalidParameter(format!(
                "total sites must be in 1..={MAX_SITES}, got {total_sites}"
            )));
        }
        if let Some(t) = terms.iter().find(|t| t.total_sites != total_sites) {
            return Err(CcrError::DimensionMismatch {
                expected: 1 << total_sites,
                found: t.dim(),
            });
        }
        Ok(Self { total_sites, terms })
    }

    pub fn total_sites(&self) -> usize {
        self.total_sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_sites
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        out.iter_mut().for_each(|y| *y = ZERO);
        if out.len() >= PARALLEL_MIN_DIM {
            const CHUNK: usize = 1 << 12;
            out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
                for term in &self.terms {
                    term.accumulate(x, chunk, c * CHUNK);
                }
            });
        } else {
            for term in &self.terms {
                term.accumulate(x, out, 0);
            }
        }
    }

    pub fn apply(&self, x: &StateVector) -> StateVector {
        let mut out = StateVector::zeros(self.dim());
        self.apply_into(x.as_slice(), out.as_mut_slice());
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            total_sites: self.total_sites,
            terms: self.terms.iter().map(PauliString::adjoint).collect(),
        }
    }

    pub fn scaled(&self, a: C64) -> Self {
        Self {
            total_sites: self.total_sites,
            terms: self.terms.iter().map(|t| t.scaled(a)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.total_sites != other.total_sites {
            return Err(CcrError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            total_sites: self.total_sites,
            terms,
        })
    }

    /// `self ⊗ other`: `other` keeps the low sites, `self` is shifted above it.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let total = self.total_sites + other.total_sites;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let sites = b
                    .sites
                    .iter()
                    .copied()
                    .chain(a.sites.iter().map(|&(k, l)| (k + other.total_sites, l)));
                terms.push(PauliString::new(a.coefficient * b.coefficient, sites, total)?);
            }
        }
        Self::new(total, terms)
    }

    /// Operator product, returned in the `X/Y/Z` basis with like strings merged.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let left: Vec<PauliString> = self.terms.iter().flat_map(|t| t.to_pauli_basis()).collect();
        let right: Vec<PauliString> = other.terms.iter().flat_map(|t| t.to_pauli_basis()).collect();
        let mut products = Vec::with_capacity(left.len() * right.len());
        for a in &left {
            for b in &right {
                products.push(a.mul_pauli(b)?);
            }
        }
        Ok(Self::merged(self.total_sites, products))
    }

    /// Combines strings with identical label sets and drops zero terms.
    pub fn simplified(&self) -> Self {
        let expanded: Vec<PauliString> = self.terms.iter().flat_map(|t| t.to_pauli_basis()).collect();
        Self::merged(self.total_sites, expanded)
    }

    fn merged(total_sites: usize, terms: Vec<PauliString>) -> Self {
        let mut acc: BTreeMap<Vec<(usize, PauliLabel)>, C64> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.sites.clone()).or_insert(ZERO) += t.coefficient;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-15)
            .map(|(sites, c)| PauliString::new(c, sites, total_sites).expect("merged string is valid"))
            .collect();
        Self { total_sites, terms }
    }

    pub fn normalized_trace(&self) -> C64 {
        self.terms.iter().map(PauliString::normalized_trace).sum()
    }

    /// `tau(self^dagger self)`, computed from pairwise string overlaps.
    pub fn hs_norm_sqr(&self) -> f64 {
        let mut acc = ZERO;
        for a in &self.terms {
            for b in &self.terms {
                acc += a.hs_inner(b).expect("same site count");
            }
        }
        acc.re.max(0.0)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for term in &self.terms {
            for col in 0..dim {
                if let Some((row, amp)) = term.act_on_basis(col) {
                    m[(row, col)] += amp;
                }
            }
        }
        m
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
