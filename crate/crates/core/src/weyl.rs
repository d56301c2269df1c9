//! Clock-and-shift canonical pairs `(U, V)` with `UV = e^{2 pi i / nu} VU`,
//! the finite Heisenberg group they represent, plateau vectors that are
//! approximately invariant under both, and the quadrature operators whose
//! commutator approaches `i` on those vectors.
//!
//! Basis: `|u_k> = e_k`. `U = diag(e^{2 pi i k / nu})` and `V e_k = e_{k+1 mod nu}`.
//! Every power `V^l U^k` is a phased permutation and is built by index
//! arithmetic as a two-diagonal banded operator.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{CcrError, Result};
use crate::linalg::{commutator_apply, BandedMatrix, LinearOperator, StateVector, C64};

/// `e^{2 pi i k / nu}` with the exponent reduced mod `nu` first.
pub fn root_of_unity(nu: usize, k: i128) -> C64 {
    let r = k.rem_euclid(nu as i128) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / nu as f64)
}

/// Window size used by sweeps: `floor(sqrt(nu))`.
pub fn default_window(nu: usize) -> usize {
    let mut r = (nu as f64).sqrt() as usize;
    while r * r > nu {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= nu {
        r += 1;
    }
    r
}

/// Operator `e_c -> weight(c) e_{(c + shift) mod nu}` as a banded matrix.
fn phased_shift(nu: usize, shift: usize, weight: impl Fn(usize) -> C64) -> LinearOperator {
    let shift = shift % nu;
    let diagonals = if shift == 0 {
        vec![(0, (0..nu).map(&weight).collect())]
    } else {
        let lower: Vec<C64> = (0..nu - shift).map(&weight).collect();
        let corner: Vec<C64> = (nu - shift..nu).map(&weight).collect();
        vec![(-(shift as isize), lower), ((nu - shift) as isize, corner)]
    };
    LinearOperator::banded(BandedMatrix::new(nu, diagonals).expect("phased shift band is well formed"))
}

/// A canonical pair of `nu x nu` unitaries.
#[derive(Debug, Clone)]
pub struct WeylPair {
    nu: usize,
    /// `roots[r] = e^{2 pi i r / nu}`
    roots: Arc<[C64]>,
    u: LinearOperator,
    v: LinearOperator,
}

/// CCR defects of a vector, both normalized by `||xi||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcrDefect {
    /// `||([Q^(n), P^(m)] - i) xi||`
    pub quadrature: f64,
    /// `||((nu / 2 pi m n) [U^m, V^n] - i) xi||`
    pub group: f64,
}

impl WeylPair {
    pub fn new(nu: usize) -> Result<Self> {
        if nu == 0 {
            return Err(CcrError::InvalidParameter("nu must be at least 1".into()));
        }
        let roots: Arc<[C64]> = (0..nu).map(|r| root_of_unity(nu, r as i128)).collect();
        Ok(Self {
            nu,
            u: phased_shift(nu, 0, |c| roots[c]),
            roots,
            v: phased_shift(nu, 1, |_| C64::new(1.0, 0.0)),
        })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Clock operator `U`.
    pub fn u(&self) -> &LinearOperator {
        &self.u
    }

    /// Shift operator `V`.
    pub fn v(&self) -> &LinearOperator {
        &self.v
    }

    fn reduce(&self, n: i64) -> usize {
        (n as i128).rem_euclid(self.nu as i128) as usize
    }

    /// `U^m` for any integer `m`.
    pub fn clock_power(&self, m: i64) -> LinearOperator {
        self.monomial(0, 0, m)
    }

    /// `V^n` for any integer `n`.
    pub fn shift_power(&self, n: i64) -> LinearOperator {
        self.monomial(0, n, 0)
    }

    /// `e^{2 pi i phase / nu} V^l U^k`.
    pub fn monomial(&self, phase: i64, l: i64, k: i64) -> LinearOperator {
        let (phase, k) = (self.reduce(phase), self.reduce(k));
        let nu = self.nu;
        phased_shift(nu, self.reduce(l), |c| {
            self.roots[((phase as u128 + k as u128 * c as u128) % nu as u128) as usize]
        })
    }

    /// `|v_n> = nu^{-1/2} sum_k e^{2 pi i n k / nu} |u_k>`, an eigenvector of
    /// `V` with eigenvalue `e^{-2 pi i n / nu}`.
    pub fn fourier_basis_vector(&self, n: usize) -> Result<StateVector> {
        if n >= self.nu {
            return Err(CcrError::IndexOutOfRange {
                index: n,
                bound: self.nu,
            });
        }
        let scale = 1.0 / (self.nu as f64).sqrt();
        StateVector::from_vec(
            (0..self.nu)
                .map(|k| root_of_unity(self.nu, n as i128 * k as i128) * scale)
                .collect(),
        )
    }

    /// Uniform superposition of `|u_k>` over the window `[l mu, (l+1) mu)`.
    pub fn plateau_vector(&self, l: usize, mu: usize) -> Result<StateVector> {
        if mu == 0 {
            return Err(CcrError::InvalidParameter("window size mu must be at least 1".into()));
        }
        let end = (l + 1)
            .checked_mul(mu)
            .filter(|&e| e <= self.nu)
            .ok_or_else(|| {
                CcrError::InvalidParameter(format!(
                    "window [{}, {}) exceeds dimension {}",
                    l.saturating_mul(mu),
                    (l + 1).saturating_mul(mu),
                    self.nu
                ))
            })?;
        let mut v = StateVector::zeros(self.nu);
        let amp = C64::new(1.0 / (mu as f64).sqrt(), 0.0);
        for k in l * mu..end {
            v[k] = amp;
        }
        Ok(v)
    }

    /// `(P^(m), Q^(n))` with
    /// `P^(m) = (i/m) sqrt(nu/8pi) (U^m - U^-m)` and
    /// `Q^(n) = (i/n) sqrt(nu/8pi) (V^n - V^-n)`.
    pub fn quadrature_ops(&self, m: usize, n: usize) -> Result<(LinearOperator, LinearOperator)> {
        if m == 0 || n == 0 {
            return Err(CcrError::InvalidParameter(format!(
                "quadrature orders must be positive, got m={m}, n={n}"
            )));
        }
        let c = (self.nu as f64 / (8.0 * PI)).sqrt();
        let minus_one = C64::new(-1.0, 0.0);
        let (m, n) = (m as i64, n as i64);
        let p = self
            .clock_power(m)
            .plus(&self.clock_power(-m).scaled(minus_one))?
            .scaled(C64::new(0.0, c / m as f64));
        let q = self
            .shift_power(n)
            .plus(&self.shift_power(-n).scaled(minus_one))?
            .scaled(C64::new(0.0, c / n as f64));
        Ok((p, q))
    }

    /// `||((nu / 2 pi m n) [U^m, V^n] - i) xi|| / ||xi||` for nonzero integers `m`, `n`.
    pub fn group_defect(&self, m: i64, n: i64, xi: &StateVector) -> Result<f64> {
        if m == 0 || n == 0 {
            return Err(CcrError::InvalidParameter("m and n must be nonzero".into()));
        }
        let norm = nonzero_norm(xi)?;
        let comm = commutator_apply(&self.clock_power(m), &self.shift_power(n), xi)?;
        let scale = self.nu as f64 / (2.0 * PI * (m * n) as f64);
        let mut r = comm.scale(C64::new(scale, 0.0));
        r.axpy(C64::new(0.0, -1.0), xi)?;
        Ok(r.norm() / norm)
    }

    pub fn ccr_defect(&self, m: usize, n: usize, xi: &StateVector) -> Result<CcrDefect> {
        let norm = nonzero_norm(xi)?;
        let (p, q) = self.quadrature_ops(m, n)?;
        let mut r = commutator_apply(&q, &p, xi)?;
        r.axpy(C64::new(0.0, -1.0), xi)?;
        Ok(CcrDefect {
            quadrature: r.norm() / norm,
            group: self.group_defect(m as i64, n as i64, xi)?,
        })
    }

    /// `||[U^m, V^n] xi - (e^{2 pi i m n / nu} - 1) V^n U^m xi||`, which vanishes
    /// identically at every `nu`.
    pub fn commutator_factorization_defect(&self, m: i64, n: i64, xi: &StateVector) -> Result<f64> {
        let lhs = commutator_apply(&self.clock_power(m), &self.shift_power(n), xi)?;
        let factor = root_of_unity(self.nu, m as i128 * n as i128) - 1.0;
        let vu = self.shift_power(n).apply(&self.clock_power(m).apply(xi)?)?;
        lhs.distance(&vu.scale(factor))
    }
}

fn nonzero_norm(xi: &StateVector) -> Result<f64> {
    let n = xi.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(CcrError::ZeroVector);
    }
    Ok(n)
}

/// Element `(k, l, m)` of the finite Heisenberg group over `Z / nu Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    k: usize,
    l: usize,
    m: usize,
    nu: usize,
}

impl HeisenbergElement {
    /// Components are reduced mod `nu`.
    pub fn new(k: i64, l: i64, m: i64, nu: usize) -> Result<Self> {
        if nu == 0 {
            return Err(CcrError::InvalidParameter("nu must be at least 1".into()));
        }
        let r = |x: i64| (x as i128).rem_euclid(nu as i128) as usize;
        Ok(Self {
            k: r(k),
            l: r(l),
            m: r(m),
            nu,
        })
    }

    pub fn identity(nu: usize) -> Result<Self> {
        Self::new(0, 0, 0, nu)
    }

    pub fn components(&self) -> (usize, usize, usize) {
        (self.k, self.l, self.m)
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// `(k, l, m)(k', l', m') = (k + k', l + l', m + m' + k l')`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nu != other.nu {
            return Err(CcrError::InvalidParameter(format!(
                "cannot multiply elements of H_{} and H_{}",
                self.nu, other.nu
            )));
        }
        let nu = self.nu as u128;
        let add = |a: usize, b: usize| ((a as u128 + b as u128) % nu) as usize;
        let twist = ((self.k as u128 * other.l as u128) % nu) as usize;
        Ok(Self {
            k: add(self.k, other.k),
            l: add(self.l, other.l),
            m: add(add(self.m, other.m), twist),
            nu: self.nu,
        })
    }
}

/// `pi(k, l, m) = e^{2 pi i m / nu} V^l U^k`.
pub fn heisenberg_rep(pair: &WeylPair, g: &HeisenbergElement) -> Result<LinearOperator> {
    if g.nu != pair.nu {
        return Err(CcrError::InvalidParameter(format!(
            "group element of H_{} used with a pair of dimension {}",
            g.nu, pair.nu
        )));
    }
    Ok(pair.monomial(g.m as i64, g.l as i64, g.k as i64))
}

/// `sqrt(2 / mu)`: the exact shift defect `||V|l> - |l>||` of a plateau vector.
pub fn plateau_shift_defect(mu: usize) -> f64 {
    (2.0 / mu as f64).sqrt()
}

/// `2 pi (l + 1) mu / nu`: upper bound on the clock defect `||U|l> - |l>||`.
pub fn plateau_clock_bound(nu: usize, mu: usize, l: usize) -> f64 {
    2.0 * PI * ((l + 1) * mu) as f64 / nu as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{operator_norm, random_unit_vectors};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn nu_zero_rejected() {
        assert!(WeylPair::new(0).is_err());
        assert!(HeisenbergElement::new(0, 0, 0, 0).is_err());
    }

    #[test]
    fn nu_one_is_trivial() {
        let pair = WeylPair::new(1).unwrap();
        let one = nalgebra::DMatrix::from_element(1, 1, c(1.0, 0.0));
        assert_eq!(pair.u().to_dense().unwrap(), one);
        assert_eq!(pair.v().to_dense().unwrap(), one);
        assert_eq!(pair.fourier_basis_vector(0).unwrap().as_slice(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn nu_two_matrices() {
        let pair = WeylPair::new(2).unwrap();
        let u = pair.u().to_dense().unwrap();
        let v = pair.v().to_dense().unwrap();
        assert!((u[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(v[(0, 1)], c(1.0, 0.0));
        assert_eq!(v[(1, 0)], c(1.0, 0.0));
        assert!((&u * &v + &v * &u).norm() < 1e-15);
    }

    #[test]
    fn clock_spectrum_is_roots_of_unity() {
        let pair = WeylPair::new(16).unwrap();
        let d = pair.u().to_dense().unwrap();
        let mut hit = [false; 16];
        for k in 0..16 {
            let z = d[(k, k)];
            let angle = z.arg().rem_euclid(2.0 * PI);
            let idx = (angle * 16.0 / (2.0 * PI)).round() as usize % 16;
            assert!((z - root_of_unity(16, idx as i128)).norm() < 1e-14);
            hit[idx] = true;
        }
        assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn shift_is_unitary_norm_one() {
        let pair = WeylPair::new(16).unwrap();
        assert!((operator_norm(pair.v(), 1e-10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_vectors() {
        let pair = WeylPair::new(4).unwrap();
        let v0 = pair.fourier_basis_vector(0).unwrap();
        assert!(v0.as_slice().iter().all(|z| (z - c(0.5, 0.0)).norm() < 1e-15));
        assert!(pair.v().apply(&v0).unwrap().distance(&v0).unwrap() < 1e-15);
        let v1 = pair.fourier_basis_vector(1).unwrap();
        let expected = v1.scale(c(0.0, -1.0));
        assert!(pair.v().apply(&v1).unwrap().distance(&expected).unwrap() < 1e-15);
        assert!(pair.fourier_basis_vector(4).is_err());
    }

    #[test]
    fn heisenberg_group_law() {
        let a = HeisenbergElement::new(1, 0, 0, 4).unwrap();
        let b = HeisenbergElement::new(0, 1, 0, 4).unwrap();
        assert_eq!(a.mul(&b).unwrap().components(), (1, 1, 1));
        assert_eq!(b.mul(&a).unwrap().components(), (1, 1, 0));
        let other = HeisenbergElement::new(0, 1, 0, 5).unwrap();
        assert!(a.mul(&other).is_err());
        assert_eq!(HeisenbergElement::new(-1, 5, 9, 4).unwrap().components(), (3, 1, 1));
    }

    #[test]
    fn heisenberg_rep_on_e0() {
        let pair = WeylPair::new(4).unwrap();
        let a = HeisenbergElement::new(1, 0, 0, 4).unwrap();
        let b = HeisenbergElement::new(0, 1, 0, 4).unwrap();
        let e0 = StateVector::basis(4, 0).unwrap();
        let lhs = heisenberg_rep(&pair, &a)
            .unwrap()
            .apply(&heisenberg_rep(&pair, &b).unwrap().apply(&e0).unwrap())
            .unwrap();
        let rhs = heisenberg_rep(&pair, &a.mul(&b).unwrap()).unwrap().apply(&e0).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-15);
        let id = heisenberg_rep(&pair, &HeisenbergElement::identity(4).unwrap()).unwrap();
        assert_eq!(id.to_dense().unwrap(), nalgebra::DMatrix::identity(4, 4));
        let wrong = HeisenbergElement::identity(5).unwrap();
        assert!(heisenberg_rep(&pair, &wrong).is_err());
    }

    #[test]
    fn plateau_windows() {
        let pair = WeylPair::new(4).unwrap();
        assert_eq!(pair.plateau_vector(2, 1).unwrap(), StateVector::basis(4, 2).unwrap());
        assert!(pair.plateau_vector(2, 2).is_err());
        assert!(pair.plateau_vector(0, 0).is_err());

        let pair = WeylPair::new(16).unwrap();
        let v = pair.plateau_vector(0, 4).unwrap();
        let shifted = pair.v().apply(&v).unwrap();
        assert!((shifted.distance(&v).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quadratures_degenerate_and_hermitian() {
        let pair = WeylPair::new(2).unwrap();
        let (p, _) = pair.quadrature_ops(1, 1).unwrap();
        assert!(p.to_dense().unwrap().norm() < 1e-15);
        assert!(pair.quadrature_ops(0, 1).is_err());

        let pair = WeylPair::new(64).unwrap();
        let (p, q) = pair.quadrature_ops(1, 1).unwrap();
        let xs = random_unit_vectors(64, 10, 11);
        assert!(p.hermiticity_defect(&xs).unwrap() < 1e-12);
        assert!(q.hermiticity_defect(&xs).unwrap() < 1e-12);
    }

    #[test]
    fn q_is_imaginary_antisymmetric_with_corners() {
        let pair = WeylPair::new(64).unwrap();
        let (_, q) = pair.quadrature_ops(1, 1).unwrap();
        let d = q.to_dense().unwrap();
        let scale = (64.0 / (8.0 * PI)).sqrt();
        for r in 0..64 {
            for col in 0..64 {
                assert!(d[(r, col)].re.abs() < 1e-15);
                assert!((d[(r, col)] + d[(col, r)]).norm() < 1e-15);
            }
        }
        // V e_63 = e_0 gives the wrap-around entry (0, 63).
        assert!((d[(0, 63)] - c(0.0, scale)).norm() < 1e-14);
        assert!((d[(63, 0)] - c(0.0, -scale)).norm() < 1e-14);
        assert!((d[(1, 0)] - c(0.0, scale)).norm() < 1e-14);
    }

    #[test]
    fn defect_rejects_zero_vector() {
        let pair = WeylPair::new(8).unwrap();
        assert_eq!(pair.ccr_defect(1, 1, &StateVector::zeros(8)), Err(CcrError::ZeroVector));
        assert!(pair.group_defect(0, 1, &StateVector::basis(8, 0).unwrap()).is_err());
    }

    #[test]
    fn window_rule() {
        assert_eq!(default_window(1), 1);
        assert_eq!(default_window(15), 3);
        assert_eq!(default_window(16), 4);
        assert_eq!(default_window(1 << 18), 512);
    }
}
