//! Pauli-tensor gamma matrices for the Clifford algebra on `n = 2 nu + 1`
//! generators, the `so(n)` basis `E_ij = e_i e_j` with `e_i = i gamma_i`,
//! and its `p`-fold tensor-sum representation.
//!
//! With sites `1..=nu`:
//!
//! ```text
//! gamma_{2k-1} =  sigma_2(k) sigma_3(k+1) ... sigma_3(nu)
//! gamma_{2k}   = -sigma_1(k) sigma_3(k+1) ... sigma_3(nu)
//! gamma_{2nu+1} = sigma_3(1) ... sigma_3(nu)
//! ```

use std::collections::BTreeMap;

use crate::error::{CcrError, Result};
use crate::linalg::{
    anticommutator_apply, commutator_apply, normalized_trace, LinearOperator, PauliLabel,
    PauliString, PauliSum, StateVector, C64, DENSIFY_CAP, MAX_SITES,
};

/// Default budget for one state vector: `2^22` complex doubles.
pub const DEFAULT_STATE_BUDGET_BYTES: u128 = (1u128 << 22) * 16;

/// 1-based generator pair `(i, j)`, `i < j`.
pub type IndexPair = (usize, usize);

/// The `2 nu` gamma strings of one block whose sites start after `offset`,
/// embedded in `total_sites` sites. Entry `i - 1` is `gamma_i`.
pub fn block_gamma_strings(nu: usize, offset: usize, total_sites: usize) -> Result<Vec<PauliString>> {
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(2 * nu);
    for k in 1..=nu {
        let tail = || (k + 1..=nu).map(|s| (s + offset, PauliLabel::Z));
        out.push(PauliString::new(
            one,
            std::iter::once((k + offset, PauliLabel::Y)).chain(tail()),
            total_sites,
        )?);
        out.push(PauliString::new(
            -one,
            std::iter::once((k + offset, PauliLabel::X)).chain(tail()),
            total_sites,
        )?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GammaFamily {
    nu: usize,
    strings: Vec<PauliString>,
    gammas: Vec<LinearOperator>,
}

impl GammaFamily {
    pub fn new(nu: usize) -> Result<Self> {
        if nu == 0 || nu > MAX_SITES {
            return Err(CcrError::InvalidParameter(format!(
                "nu must be in 1..={MAX_SITES}, got {nu}"
            )));
        }
        let mut strings = block_gamma_strings(nu, 0, nu)?;
        strings.push(PauliString::new(
            C64::new(1.0, 0.0),
            (1..=nu).map(|s| (s, PauliLabel::Z)),
            nu,
        )?);
        let gammas = strings
            .iter()
            .map(|s| LinearOperator::pauli_sum(PauliSum::new(nu, vec![s.clone()]).expect("same sites")))
            .collect();
        Ok(Self { nu, strings, gammas })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Number of generators, `2 nu + 1`.
    pub fn n(&self) -> usize {
        2 * self.nu + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.nu
    }

    /// `gamma_i`, 1-based.
    pub fn gamma(&self, i: usize) -> Result<&LinearOperator> {
        self.check_index(i)?;
        Ok(&self.gammas[i - 1])
    }

    pub fn gammas(&self) -> &[LinearOperator] {
        &self.gammas
    }

    pub fn gamma_string(&self, i: usize) -> Result<&PauliString> {
        self.check_index(i)?;
        Ok(&self.strings[i - 1])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(CcrError::IndexOutOfRange {
                index: i,
                bound: self.n() + 1,
            });
        }
        Ok(())
    }

    /// `E_ij = (i gamma_i)(i gamma_j) = -gamma_i gamma_j` as a single string.
    pub fn so_n_string(&self, i: usize, j: usize) -> Result<PauliString> {
        if i == j {
            return Err(CcrError::InvalidParameter(format!("E_ij needs i != j, got i = j = {i}")));
        }
        let prod = self.gamma_string(i)?.mul_pauli(self.gamma_string(j)?)?;
        Ok(prod.scaled(C64::new(-1.0, 0.0)))
    }

    /// `E_ij` for all `i < j`, in lexicographic order.
    pub fn so_n_basis(&self) -> Result<Vec<(IndexPair, LinearOperator)>> {
        let mut out = Vec::new();
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                let s = self.so_n_string(i, j)?;
                out.push(((i, j), LinearOperator::pauli_sum(PauliSum::new(self.nu, vec![s])?)));
            }
        }
        Ok(out)
    }

    /// Largest `||{gamma_i, gamma_j} xi - 2 delta_ij xi||` over all pairs
    /// `i <= j` and the given vectors.
    pub fn anticommutation_defect(&self, vectors: &[StateVector]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..self.gammas.len() {
            for j in i..self.gammas.len() {
                for x in vectors {
                    let mut r = anticommutator_apply(&self.gammas[i], &self.gammas[j], x)?;
                    if i == j {
                        r.axpy(C64::new(-2.0, 0.0), x)?;
                    }
                    worst = worst.max(r.norm());
                }
            }
        }
        Ok(worst)
    }

    /// Same check on dense matrices over the full basis: largest entry of
    /// `{gamma_i, gamma_j} - 2 delta_ij`.
    pub fn dense_anticommutation_defect(&self) -> Result<f64> {
        let dense: Vec<_> = self
            .gammas
            .iter()
            .map(LinearOperator::to_dense)
            .collect::<Result<_>>()?;
        let id = nalgebra::DMatrix::<C64>::identity(self.dim(), self.dim());
        let mut worst: f64 = 0.0;
        for i in 0..dense.len() {
            for j in i..dense.len() {
                let mut anti = &dense[i] * &dense[j] + &dense[j] * &dense[i];
                if i == j {
                    anti -= &id * C64::new(2.0, 0.0);
                }
                worst = worst.max(anti.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        Ok(worst)
    }

    /// `sum_{l < p} 1 ⊗ ... ⊗ E_ij ⊗ ... ⊗ 1` on `p nu` sites.
    pub fn tensor_sum_rep(&self, p: usize, pair: IndexPair) -> Result<LinearOperator> {
        self.tensor_sum_rep_with_budget(p, pair, DEFAULT_STATE_BUDGET_BYTES)
    }

    pub fn tensor_sum_rep_with_budget(
        &self,
        p: usize,
        (i, j): IndexPair,
        budget_bytes: u128,
    ) -> Result<LinearOperator> {
        if p == 0 {
            return Err(CcrError::InvalidParameter("tensor power p must be at least 1".into()));
        }
        let total = p
            .checked_mul(self.nu)
            .filter(|&t| t <= MAX_SITES)
            .ok_or_else(|| CcrError::ResourceCap {
                what: format!("tensor sum over {p} copies of {} sites", self.nu),
                required_bytes: u128::MAX,
                budget_bytes,
            })?;
        let required = (1u128 << total) * 16;
        if required > budget_bytes {
            return Err(CcrError::ResourceCap {
                what: format!("state vector on {total} sites"),
                required_bytes: required,
                budget_bytes,
            });
        }
        let e = self.so_n_string(i, j)?;
        let terms = (0..p)
            .map(|l| e.shifted(l * self.nu, total))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearOperator::pauli_sum(PauliSum::new(total, terms)?))
    }
}

/// `[E_ij, E_kl] = sum_ab c_ab E_ab`, extracted numerically.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StructureConstants {
    pub n: usize,
    pub table: BTreeMap<(IndexPair, IndexPair), Vec<(IndexPair, C64)>>,
    /// Largest normalized Hilbert-Schmidt norm of a bracket's component
    /// outside `span{E_ab}`.
    pub closure_residual: f64,
}

impl StructureConstants {
    pub fn get(&self, a: IndexPair, b: IndexPair) -> Option<&[(IndexPair, C64)]> {
        self.table.get(&(a, b)).map(Vec::as_slice)
    }
}

/// Dense extraction of the `so(n)` structure constants from `family`. The
/// coefficients are the projections `tau(E_ab^dagger [E_ij, E_kl])`; the
/// `E_ab` are unitary and mutually orthogonal under `tau`.
pub fn structure_constants(family: &GammaFamily) -> Result<StructureConstants> {
    if family.dim() > DENSIFY_CAP {
        return Err(CcrError::ResourceCap {
            what: "dense structure-constant extraction".into(),
            required_bytes: (family.dim() as u128).pow(2) * 16,
            budget_bytes: (DENSIFY_CAP as u128).pow(2) * 16,
        });
    }
    let basis: Vec<(IndexPair, nalgebra::DMatrix<C64>)> = family
        .so_n_basis()?
        .into_iter()
        .map(|(ij, op)| op.to_dense().map(|m| (ij, m)))
        .collect::<Result<_>>()?;
    let dim = family.dim() as f64;
    let mut table = BTreeMap::new();
    let mut closure_residual: f64 = 0.0;
    for (a, ma) in &basis {
        for (b, mb) in &basis {
            let bracket = ma * mb - mb * ma;
            let mut rest = bracket.clone();
            let mut coeffs = Vec::new();
            for (c, mc) in &basis {
                let coeff = (mc.adjoint() * &bracket).trace() / dim;
                if coeff.norm() > 1e-12 {
                    rest -= mc * coeff;
                    coeffs.push((*c, coeff));
                }
            }
            let tau_rest = normalized_trace(&LinearOperator::dense(rest.adjoint() * &rest)?);
            closure_residual = closure_residual.max(tau_rest.re.max(0.0).sqrt());
            table.insert((*a, *b), coeffs);
        }
    }
    Ok(StructureConstants {
        n: family.n(),
        table,
        closure_residual,
    })
}

/// Largest `||[X_a, X_b] xi - sum_c c_c X_c xi||` over every bracket in
/// `constants` whose indices are present in `ops`.
pub fn bracket_defect(
    ops: &BTreeMap<IndexPair, LinearOperator>,
    constants: &StructureConstants,
    vectors: &[StateVector],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for ((a, b), coeffs) in &constants.table {
        let (Some(xa), Some(xb)) = (ops.get(a), ops.get(b)) else {
            continue;
        };
        if coeffs.iter().any(|(c, _)| !ops.contains_key(c)) {
            continue;
        }
        for x in vectors {
            let mut r = commutator_apply(xa, xb, x)?;
            for (c, coeff) in coeffs {
                r.axpy(-coeff, &ops[c].apply(x)?)?;
            }
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}
