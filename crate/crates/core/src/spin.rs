//! The `(p+1)`-dimensional irreducible representation of `so(3)` and the
//! CCR approximants `Q = J_1 / sqrt(j)`, `P = J_2 / sqrt(j)`.
//!
//! Basis index `k = j - m`, so `e_0 = |J_3; j>` is the highest-weight state
//! and `e_k = |J_3; j - k>`. `J_- = J_1 - i J_2` lowers `m` by one, i.e.
//! raises the index: `<k+1| J_- |k> = sqrt((p - k)(k + 1))`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CcrError, Result};
use crate::linalg::{commutator_apply, BandedMatrix, LinearOperator, StateVector, C64, DEFAULT_SEED};

/// Largest order accepted by the truncated-series product formula.
pub const DISENTANGLED_MAX_P: usize = 12;

#[derive(Debug, Clone)]
pub struct SpinRep {
    p: usize,
    j1: LinearOperator,
    j2: LinearOperator,
    j3: LinearOperator,
    jminus: LinearOperator,
}

impl SpinRep {
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(CcrError::InvalidParameter("spin order p must be at least 1".into()));
        }
        let dim = p + 1;
        let j = p as f64 / 2.0;
        let lower: Vec<C64> = (0..p)
            .map(|k| C64::new((((p - k) * (k + 1)) as f64).sqrt(), 0.0))
            .collect();
        let jminus = BandedMatrix::new(dim, vec![(-1, lower)])?;
        let jplus = jminus.adjoint();
        let half = C64::new(0.5, 0.0);
        let j1 = jminus.plus(&jplus)?.scaled(half);
        let j2 = jminus
            .plus(&jplus.scaled(C64::new(-1.0, 0.0)))?
            .scaled(C64::new(0.0, 0.5));
        let j3 = BandedMatrix::diagonal((0..dim).map(|k| C64::new(j - k as f64, 0.0)).collect())?;
        Ok(Self {
            p,
            j1: LinearOperator::banded(j1),
            j2: LinearOperator::banded(j2),
            j3: LinearOperator::banded(j3),
            jminus: LinearOperator::banded(jminus),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn j(&self) -> f64 {
        self.p as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.p + 1
    }

    pub fn j1(&self) -> &LinearOperator {
        &self.j1
    }

    pub fn j2(&self) -> &LinearOperator {
        &self.j2
    }

    pub fn j3(&self) -> &LinearOperator {
        &self.j3
    }

    pub fn jminus(&self) -> &LinearOperator {
        &self.jminus
    }

    /// `|J_3; j - k>`.
    pub fn weight_state(&self, k: usize) -> Result<StateVector> {
        StateVector::basis(self.dim(), k)
    }

    /// `(Q, P) = (J_1, J_2) / sqrt(j)`.
    pub fn qp(&self) -> (LinearOperator, LinearOperator) {
        let s = C64::new(1.0 / self.j().sqrt(), 0.0);
        (self.j1.scaled(s), self.j2.scaled(s))
    }

    /// `||([Q, P] - i) |J_3; j - k>||`, which equals `k / j` exactly.
    pub fn theorem31_defect(&self, k: usize) -> Result<f64> {
        if k > self.p {
            return Err(CcrError::IndexOutOfRange {
                index: k,
                bound: self.p + 1,
            });
        }
        let (q, p) = self.qp();
        let e = self.weight_state(k)?;
        let mut r = commutator_apply(&q, &p, &e)?;
        r.axpy(C64::new(0.0, -1.0), &e)?;
        Ok(r.norm())
    }

    /// `e^{i s theta J_3} x` for `s = +-1`; `J_3` is diagonal so this is exact.
    fn rotate_z(&self, theta: f64, x: &StateVector) -> StateVector {
        let j = self.j();
        let mut out = x.clone();
        for (k, z) in out.as_mut_slice().iter_mut().enumerate() {
            *z *= C64::from_polar(1.0, theta * (j - k as f64));
        }
        out
    }

    /// `max ||(e^{-i theta J_3} Q e^{i theta J_3} - Q cos(theta) - P sin(theta)) xi||`
    /// over 10 seeded random unit vectors.
    pub fn covariance_defect(&self, theta: f64) -> Result<f64> {
        self.covariance_defect_seeded(theta, 10, DEFAULT_SEED)
    }

    pub fn covariance_defect_seeded(&self, theta: f64, samples: usize, seed: u64) -> Result<f64> {
        if !theta.is_finite() {
            return Err(CcrError::InvalidParameter(format!("theta must be finite, got {theta}")));
        }
        let (q, p) = self.qp();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let xi = StateVector::random_unit(self.dim(), &mut rng);
            let conj = self.rotate_z(-theta, &q.apply(&self.rotate_z(theta, &xi))?);
            let mut r = conj;
            r.axpy(C64::new(-theta.cos(), 0.0), &q.apply(&xi)?)?;
            r.axpy(C64::new(-theta.sin(), 0.0), &p.apply(&xi)?)?;
            worst = worst.max(r.norm());
        }
        Ok(worst)
    }

    /// Spin coherent state `|theta, phi> = R(theta, phi) |J_3; j>`.
    pub fn spin_coherent(&self, theta: f64, phi: f64) -> Result<StateVector> {
        let params = SpinCoherentParams::from_angles(theta, phi, self.j())?;
        self.coherent_from_mu(params.mu_c)
    }

    /// `(1 + |mu|^2)^{-j} sum_k C(2j, k)^{1/2} mu^k |J_3; j - k>`, evaluated
    /// in the log domain.
    pub fn coherent_from_mu(&self, mu: C64) -> Result<StateVector> {
        if !mu.norm().is_finite() {
            return Err(CcrError::InvalidParameter("coherent parameter must be finite".into()));
        }
        let mut out = StateVector::zeros(self.dim());
        if mu.norm() == 0.0 {
            out[0] = C64::new(1.0, 0.0);
            return Ok(out);
        }
        let log_prefactor = -self.j() * mu.norm_sqr().ln_1p();
        let (log_r, phase) = (mu.norm().ln(), mu.arg());
        for (k, log_binom) in log_binomials(self.p).into_iter().enumerate() {
            let kf = k as f64;
            let log_mag = log_prefactor + 0.5 * log_binom + kf * log_r;
            out[k] = C64::from_polar(log_mag.exp(), kf * phase);
        }
        Ok(out)
    }

    /// `e^{mu J_-} e^{-log(1 + |mu|^2) J_3} e^{-mu* J_+} |J_3; j>` with each
    /// exponential summed as a (terminating) power series. Limited to
    /// `p <= DISENTANGLED_MAX_P`.
    pub fn coherent_via_disentangled(&self, theta: f64, phi: f64) -> Result<StateVector> {
        if self.p > DISENTANGLED_MAX_P {
            return Err(CcrError::InvalidParameter(format!(
                "product-formula cross-check limited to p <= {DISENTANGLED_MAX_P}, got {}",
                self.p
            )));
        }
        let mu = SpinCoherentParams::from_angles(theta, phi, self.j())?.mu_c;
        let top = self.weight_state(0)?;
        let jplus = self.jminus.adjoint();
        let v = series_exp_apply(&jplus.scaled(-mu.conj()), &top, self.p)?;
        let w = self.j3.scaled(C64::new(-mu.norm_sqr().ln_1p(), 0.0));
        let v = diagonal_exp_apply(&w, &v)?;
        series_exp_apply(&self.jminus.scaled(mu), &v, self.p)
    }

    /// `|<J_3; j-k | theta, phi> - e^{-|z|^2/2} z^k / sqrt(k!)|` for
    /// `k = 0..=kmax`, with `mu_c = z / sqrt(2j)`.
    pub fn coherent_limit_error(&self, z: C64, kmax: usize) -> Result<Vec<f64>> {
        if kmax > self.p {
            return Err(CcrError::IndexOutOfRange {
                index: kmax,
                bound: self.p + 1,
            });
        }
        let params = SpinCoherentParams::from_z(z, self.j())?;
        let state = self.coherent_from_mu(params.mu_c)?;
        Ok((0..=kmax)
            .map(|k| (state[k] - boson_coherent_amplitude(z, k)).norm())
            .collect())
    }
}

/// Parameters of a spin coherent state. `mu_c = e^{i phi} tan(theta / 2)`,
/// `z = mu_c sqrt(2j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCoherentParams {
    pub theta: f64,
    pub phi: f64,
    pub mu_c: C64,
    pub z: C64,
}

impl SpinCoherentParams {
    pub fn from_angles(theta: f64, phi: f64, j: f64) -> Result<Self> {
        if !(0.0..PI).contains(&theta) || !phi.is_finite() {
            return Err(CcrError::InvalidParameter(format!(
                "need theta in [0, pi) and finite phi, got theta={theta}, phi={phi}"
            )));
        }
        let mu_c = C64::from_polar((theta / 2.0).tan(), phi);
        Ok(Self {
            theta,
            phi,
            mu_c,
            z: mu_c * (2.0 * j).sqrt(),
        })
    }

    pub fn from_z(z: C64, j: f64) -> Result<Self> {
        if !z.norm().is_finite() {
            return Err(CcrError::InvalidParameter("z must be finite".into()));
        }
        let mu_c = z / (2.0 * j).sqrt();
        Ok(Self {
            theta: 2.0 * mu_c.norm().atan(),
            phi: mu_c.arg(),
            mu_c,
            z,
        })
    }
}

/// `e^{-|z|^2/2} z^k / sqrt(k!)`.
pub fn boson_coherent_amplitude(z: C64, k: usize) -> C64 {
    let log_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    if z.norm() == 0.0 {
        return if k == 0 { C64::new(1.0, 0.0) } else { C64::default() };
    }
    let log_mag = -0.5 * z.norm_sqr() + k as f64 * z.norm().ln() - 0.5 * log_fact;
    C64::from_polar(log_mag.exp(), k as f64 * z.arg())
}

/// `ln C(n, k)` for `k = 0..=n`, by the multiplicative recurrence.
fn log_binomials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(acc);
    for k in 1..=n {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `sum_{n <= terms} A^n x / n!`.
fn series_exp_apply(a: &LinearOperator, x: &StateVector, terms: usize) -> Result<StateVector> {
    let mut term = x.clone();
    let mut acc = x.clone();
    for n in 1..=terms {
        term = a.apply(&term)?.scale(C64::new(1.0 / n as f64, 0.0));
        acc.axpy(C64::new(1.0, 0.0), &term)?;
    }
    Ok(acc)
}

fn diagonal_exp_apply(d: &LinearOperator, x: &StateVector) -> Result<StateVector> {
    let band = d
        .as_banded()
        .filter(|b| b.diagonals().iter().all(|(o, _)| *o == 0))
        .ok_or_else(|| CcrError::IncompatibleRealizations("expected a diagonal operator".into()))?;
    let mut out = x.clone();
    if let Some((_, diag)) = band.diagonals().first() {
        for (z, w) in out.as_mut_slice().iter_mut().zip(diag) {
            *z *= w.exp();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unit_vectors;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Dense oracle: `R(theta, phi) = exp(i theta (J1 sin phi - J2 cos phi))`
    /// by nalgebra's scaling-and-squaring exponential.
    fn rotation_oracle(rep: &SpinRep, theta: f64, phi: f64) -> DMatrix<C64> {
        let j1 = rep.j1().to_dense().unwrap();
        let j2 = rep.j2().to_dense().unwrap();
        let gen = (j1 * c(phi.sin(), 0.0) - j2 * c(phi.cos(), 0.0)) * c(0.0, theta);
        gen.exp()
    }

    #[test]
    fn p_zero_rejected() {
        assert!(SpinRep::new(0).is_err());
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let rep = SpinRep::new(1).unwrap();
        let j1 = rep.j1().to_dense().unwrap();
        let j2 = rep.j2().to_dense().unwrap();
        let j3 = rep.j3().to_dense().unwrap();
        let s1 = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        let s2 = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.0, 0.0)]);
        let s3 = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!((j1 - s1).norm() < 1e-15);
        assert!((j2 - s2).norm() < 1e-15);
        assert!((j3 - s3).norm() < 1e-15);
    }

    #[test]
    fn lowering_matrix_element_p2() {
        let rep = SpinRep::new(2).unwrap();
        let jm = rep.jminus().to_dense().unwrap();
        assert!((jm[(1, 0)] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn j3_spectrum_p4() {
        let rep = SpinRep::new(4).unwrap();
        let d = rep.j3().to_dense().unwrap();
        let diag: Vec<f64> = (0..5).map(|k| d[(k, k)].re).collect();
        assert_eq!(diag, vec![2.0, 1.0, 0.0, -1.0, -2.0]);
    }

    #[test]
    fn qp_small_cases() {
        let rep = SpinRep::new(1).unwrap();
        let (q, _) = rep.qp();
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0), c(0.0, 0.0)],
        );
        assert!((q.to_dense().unwrap() - expected).norm() < 1e-15);

        let rep = SpinRep::new(2).unwrap();
        let (q, p) = rep.qp();
        let (qd, pd) = (q.to_dense().unwrap(), p.to_dense().unwrap());
        let comm = &qd * &pd - &pd * &qd;
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.0, 1.0),
            c(0.0, 0.0),
            c(0.0, -1.0),
        ]));
        assert!((comm - expected).norm() < 1e-14);
    }

    #[test]
    fn theorem31_values() {
        let rep = SpinRep::new(1000).unwrap();
        assert!(rep.theorem31_defect(0).unwrap() < 1e-12);
        assert!((rep.theorem31_defect(3).unwrap() - 0.006).abs() < 1e-12);
        let rep = SpinRep::new(10).unwrap();
        assert!((rep.theorem31_defect(10).unwrap() - 2.0).abs() < 1e-12);
        assert!(rep.theorem31_defect(11).is_err());
    }

    #[test]
    fn covariance_quarter_and_half_turns() {
        let rep = SpinRep::new(2).unwrap();
        assert!(rep.covariance_defect(0.0).unwrap() < 1e-15);
        let (q, p) = rep.qp();
        let (qd, pd) = (q.to_dense().unwrap(), p.to_dense().unwrap());
        let j3 = rep.j3().to_dense().unwrap();
        let rot = |t: f64| (j3.clone() * c(0.0, t)).exp();
        let quarter = rot(-PI / 2.0) * &qd * rot(PI / 2.0);
        assert!((quarter - &pd).norm() < 1e-10);
        let half = rot(-PI) * &qd * rot(PI);
        assert!((half + &qd).norm() < 1e-10);
        assert!(rep.covariance_defect(f64::NAN).is_err());
    }

    #[test]
    fn coherent_special_cases() {
        let rep = SpinRep::new(2).unwrap();
        let top = rep.spin_coherent(0.0, 1.3).unwrap();
        assert_eq!(top, rep.weight_state(0).unwrap());
        let v = rep.spin_coherent(PI / 2.0, 0.0).unwrap();
        let expected = [0.5, 0.5 * 2f64.sqrt(), 0.5];
        for (k, e) in expected.iter().enumerate() {
            assert!((v[k] - c(*e, 0.0)).norm() < 1e-15);
        }
        assert!(rep.spin_coherent(PI, 0.0).is_err());
        assert!(rep.spin_coherent(-0.1, 0.0).is_err());
    }

    #[test]
    fn coherent_matches_matrix_exponential() {
        let rep = SpinRep::new(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            use rand::Rng;
            let theta = rng.random_range(0.0..PI * 0.95);
            let phi = rng.random_range(0.0..2.0 * PI);
            let r = rotation_oracle(&rep, theta, phi);
            let oracle: Vec<C64> = r.column(0).iter().copied().collect();
            let got = rep.spin_coherent(theta, phi).unwrap();
            for k in 0..7 {
                assert!((got[k] - oracle[k]).norm() < 1e-9, "theta={theta} phi={phi} k={k}");
            }
            let series = rep.coherent_via_disentangled(theta, phi).unwrap();
            assert!(series.distance(&got).unwrap() < 1e-10);
        }
        assert!(SpinRep::new(13).unwrap().coherent_via_disentangled(0.1, 0.0).is_err());
    }

    #[test]
    fn coherent_state_normalized_at_large_p() {
        let rep = SpinRep::new(10_000).unwrap();
        let v = rep.spin_coherent(0.3, 2.0).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_limit_values() {
        let rep = SpinRep::new(10).unwrap();
        assert!(rep
            .coherent_limit_error(c(0.0, 0.0), 5)
            .unwrap()
            .iter()
            .all(|&e| e == 0.0));
        assert!(rep.coherent_limit_error(c(1.0, 0.0), 11).is_err());

        let big = SpinRep::new(1000).unwrap();
        let e0 = big.coherent_limit_error(c(1.0, 0.0), 0).unwrap()[0];
        let direct = ((1.0 + 1.0 / 1000.0f64).powf(-500.0) - (-0.5f64).exp()).abs();
        assert!((e0 - direct).abs() < 1e-12);
        assert!(e0 <= 3e-4);

        let small = SpinRep::new(100).unwrap();
        let a = big.coherent_limit_error(c(1.0, 0.0), 5).unwrap();
        let b = small.coherent_limit_error(c(1.0, 0.0), 5).unwrap();
        for k in 0..=5 {
            assert!(a[k] < b[k], "k={k}: {} vs {}", a[k], b[k]);
        }
    }

    #[test]
    fn so3_relations() {
        for p in [1, 2, 7, 50] {
            let rep = SpinRep::new(p).unwrap();
            let ops = [rep.j1(), rep.j2(), rep.j3()];
            for x in random_unit_vectors(p + 1, 3, p as u64) {
                for (a, b, cc) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                    let lhs = commutator_apply(ops[a], ops[b], &x).unwrap();
                    let rhs = ops[cc].apply(&x).unwrap().scale(c(0.0, 1.0));
                    assert!(lhs.distance(&rhs).unwrap() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn log_binomials_small() {
        let lb = log_binomials(4);
        let exact = [1.0, 4.0, 6.0, 4.0, 1.0];
        for (a, b) in lb.iter().zip(exact) {
            assert!((a.exp() - b).abs() < 1e-12);
        }
    }
}
