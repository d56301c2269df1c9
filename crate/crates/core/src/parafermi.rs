//! Green-ansatz parafermi oscillators of order `p` on `nu` modes.
//!
//! Green component `(k, alpha)` lives on site `(alpha - 1) nu + k`. Its
//! Jordan-Wigner tail of `sigma_3` factors runs over sites `k+1..=nu` of the
//! same block only, so components in different blocks commute.

use nalgebra::DMatrix;

use crate::clifford::block_gamma_strings;
use crate::error::{CcrError, Result};
use crate::linalg::{
    anticommutator_apply, commutator_apply, nested_commutator_apply, random_unit_vectors,
    LinearOperator, PauliLabel, PauliString, PauliSum, StateVector, C64, DEFAULT_SEED, MAX_SITES,
};

pub const DEFAULT_SITE_CAP: usize = 22;
pub const DEFAULT_EXCITATION_CAP: usize = 6;

/// Vectors whose norm falls below this are treated as zero.
const ZERO_NORM: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct GreenSystem {
    p: usize,
    nu: usize,
    excitation_cap: usize,
    strings: Vec<PauliString>,
    components: Vec<LinearOperator>,
    b: Vec<LinearOperator>,
    beta: Vec<LinearOperator>,
    vacuum: StateVector,
}

/// Diagonal number operators.
#[derive(Debug, Clone)]
pub struct NumberOps {
    pub total: LinearOperator,
    /// `N_k = sum_alpha N_k^(alpha)`, entry `k - 1`.
    pub modes: Vec<LinearOperator>,
    /// `N^(alpha) = sum_k N_k^(alpha)`, entry `alpha - 1`.
    pub blocks: Vec<LinearOperator>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberDefects {
    /// `N_k` against `([b_k^dagger, b_k] + p) / 2`.
    pub identity: f64,
    /// `N_k b_k = b_k (N_k - 1)` and `N_k b_k^dagger = b_k^dagger (N_k + 1)`.
    pub ladder: f64,
    /// `[N_k, N_l]`.
    pub commuting: f64,
    /// `b^dagger b = N` and `b b^dagger = 1 - N` per Green component.
    pub component: f64,
}

/// Lemma 5.1 defects for one vector, with the bounds from its proof.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma51Record {
    /// `||[beta_k, beta_l] xi||`
    pub i_bb: f64,
    /// `(2/p) sum_alpha sqrt(<N^(alpha)>/2)`
    pub i_bb_bound: f64,
    /// `||[beta_k, beta_l^dagger] xi||`
    pub i_bbdag: f64,
    /// `(2/p) sum_alpha sqrt(<N_k^(alpha)>)`, from
    /// `||b_k^a b_l^a dagger xi||^2 = <N_k^a (1 - N_l^a)>`.
    pub i_bbdag_bound: f64,
    /// `||([beta_k, beta_k^dagger] - 1) xi||`
    pub ii: f64,
    /// `(2/p) ||(sum_alpha N_k^(alpha)) xi||`, equal to `ii`.
    pub ii_identity: f64,
    /// `(2/p) sqrt(<xi|N^2|xi>)`
    pub ii_bound: f64,
    /// `||beta_k beta_k^dagger^n xi - (beta_k^dagger^n beta_k + n beta_k^dagger^(n-1)) xi||`
    pub iii: f64,
    pub norm_sqr: f64,
    pub n_sqr_expectation: f64,
}

/// Lemma 5.2 defects for one mode of a Fock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDefects {
    /// `||beta_k^dagger beta_k xi - n_k xi||`
    pub i: f64,
    /// `||beta_k beta_k^dagger xi - (n_k + 1) xi||`
    pub ii: f64,
    /// `||beta_k^dagger xi - sqrt(n_k + 1) |.., n_k + 1, ..>||`; `None` when
    /// the raised label leaves the caps.
    pub iv: Option<f64>,
    /// `||beta_k xi - sqrt(n_k) |.., n_k - 1, ..>||`
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma52Report {
    pub label: Vec<usize>,
    /// `| ||beta_1^dagger^n1 ... |0>|| - sqrt(n1! n2! ...) |`
    pub norm_error: f64,
    pub norm: f64,
    pub modes: Vec<ModeDefects>,
}

impl Lemma52Report {
    /// Largest defect over parts (i), (ii), (iv), (v) and the norm error.
    pub fn worst(&self) -> f64 {
        self.modes
            .iter()
            .flat_map(|m| [m.i, m.ii, m.iv.unwrap_or(0.0), m.v])
            .fold(self.norm_error, f64::max)
    }
}

/// Orthonormal basis of `span{beta_k1^dagger ... beta_kn^dagger |0> : n <= max_len}`.
/// The first vector is the vacuum.
#[derive(Debug, Clone)]
pub struct WordSpan {
    pub max_len: usize,
    pub basis: Vec<StateVector>,
}

impl WordSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Norm of the component of `x` orthogonal to the span.
    pub fn residual(&self, x: &StateVector) -> Result<f64> {
        let mut r = x.clone();
        for q in &self.basis {
            let c = q.inner(&r)?;
            r.axpy(-c, q)?;
        }
        Ok(r.norm())
    }
}

/// Spectrum of `sum_k beta_k^dagger beta_k` restricted to a word span.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumSpectrum {
    pub span_dim: usize,
    /// Eigenvalues below `tol`.
    pub kernel_dim: usize,
    /// `|<0|kernel vector>|` when the kernel is one-dimensional.
    pub kernel_vacuum_overlap: Option<f64>,
    /// Smallest eigenvalue above `tol`.
    pub gap: f64,
}

impl VacuumSpectrum {
    /// With a one-dimensional kernel spanned by the vacuum, every unit `xi`
    /// in the span with `max_k ||beta_k xi|| <= eps` obeys
    /// `1 - |<xi|0>|^2 <= nu eps^2 / gap`.
    pub fn overlap_deficit_bound(&self, nu: usize, eps: f64) -> f64 {
        (nu as f64 * eps * eps / self.gap).min(1.0)
    }
}

impl GreenSystem {
    pub fn new(p: usize, nu: usize) -> Result<Self> {
        Self::with_caps(p, nu, DEFAULT_SITE_CAP, DEFAULT_EXCITATION_CAP)
    }

    pub fn with_caps(p: usize, nu: usize, site_cap: usize, excitation_cap: usize) -> Result<Self> {
        if p == 0 || nu == 0 {
            return Err(CcrError::InvalidParameter(format!(
                "order and mode count must be positive, got p = {p}, nu = {nu}"
            )));
        }
        let cap = site_cap.min(MAX_SITES);
        let total = p.saturating_mul(nu);
        if total > cap {
            let required = if total < 128 { (1u128 << total) * 16 } else { u128::MAX };
            return Err(CcrError::ResourceCap {
                what: format!("Green system with p = {p}, nu = {nu} ({total} sites)"),
                required_bytes: required,
                budget_bytes: (1u128 << cap) * 16,
            });
        }
        let i = C64::new(0.0, 1.0);
        let mut strings = Vec::with_capacity(total);
        for alpha in 0..p {
            let offset = alpha * nu;
            for k in 1..=nu {
                let tail = (k + 1..=nu).map(|m| (m + offset, PauliLabel::Z));
                strings.push(PauliString::new(
                    i,
                    std::iter::once((k + offset, PauliLabel::Minus)).chain(tail),
                    total,
                )?);
            }
        }
        let components: Vec<LinearOperator> = strings
            .iter()
            .map(|s| PauliSum::new(total, vec![s.clone()]).map(LinearOperator::pauli_sum))
            .collect::<Result<_>>()?;
        let mut b = Vec::with_capacity(nu);
        for k in 0..nu {
            let terms = (0..p).map(|alpha| strings[alpha * nu + k].clone()).collect();
            b.push(LinearOperator::pauli_sum(PauliSum::new(total, terms)?));
        }
        let scale = C64::new(1.0 / (p as f64).sqrt(), 0.0);
        let beta = b.iter().map(|op| op.scaled(scale)).collect();
        // Every site in the unoccupied state, i.e. all bits set.
        let vacuum = StateVector::basis(1 << total, (1 << total) - 1)?;
        Ok(Self {
            p,
            nu,
            excitation_cap,
            strings,
            components,
            b,
            beta,
            vacuum,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn total_sites(&self) -> usize {
        self.p * self.nu
    }

    pub fn dim(&self) -> usize {
        1 << self.total_sites()
    }

    pub fn excitation_cap(&self) -> usize {
        self.excitation_cap
    }

    pub fn vacuum(&self) -> &StateVector {
        &self.vacuum
    }

    fn check_mode(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.nu {
            return Err(CcrError::IndexOutOfRange {
                index: k,
                bound: self.nu + 1,
            });
        }
        Ok(())
    }

    fn index(&self, k: usize, alpha: usize) -> Result<usize> {
        self.check_mode(k)?;
        if alpha == 0 || alpha > self.p {
            return Err(CcrError::IndexOutOfRange {
                index: alpha,
                bound: self.p + 1,
            });
        }
        Ok((alpha - 1) * self.nu + k - 1)
    }

    /// `b~_k^(alpha)`, 1-based in both indices.
    pub fn component(&self, k: usize, alpha: usize) -> Result<&LinearOperator> {
        Ok(&self.components[self.index(k, alpha)?])
    }

    pub fn component_string(&self, k: usize, alpha: usize) -> Result<&PauliString> {
        Ok(&self.strings[self.index(k, alpha)?])
    }

    /// `b_k = sum_alpha b~_k^(alpha)`.
    pub fn parafermi_op(&self, k: usize) -> Result<&LinearOperator> {
        self.check_mode(k)?;
        Ok(&self.b[k - 1])
    }

    /// `beta_k = b_k / sqrt(p)`.
    pub fn beta(&self, k: usize) -> Result<&LinearOperator> {
        self.check_mode(k)?;
        Ok(&self.beta[k - 1])
    }

    /// `(gamma_{2k-1} - i gamma_{2k}) / 2` on block `alpha`, built from the
    /// Clifford generators as a two-term sum.
    pub fn component_from_gammas(&self, k: usize, alpha: usize) -> Result<LinearOperator> {
        self.index(k, alpha)?;
        let g = block_gamma_strings(self.nu, (alpha - 1) * self.nu, self.total_sites())?;
        let half = C64::new(0.5, 0.0);
        let terms = vec![g[2 * k - 2].scaled(half), g[2 * k - 1].scaled(C64::new(0.0, -0.5))];
        Ok(LinearOperator::pauli_sum(PauliSum::new(self.total_sites(), terms)?))
    }

    fn random_vectors(&self, count: usize) -> Vec<StateVector> {
        random_unit_vectors(self.dim(), count, DEFAULT_SEED)
    }

    /// Green relations and vacuum annihilation on `vectors`:
    /// `{b_k^a, b_l^a dagger} = delta_kl`, `{b_k^a, b_l^a} = 0`, cross-block
    /// commutators zero, `b_k^a |0> = 0`.
    pub fn green_defect(&self, vectors: &[StateVector]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let n = self.components.len();
        let adj: Vec<LinearOperator> = self.components.iter().map(LinearOperator::adjoint).collect();
        for a in 0..n {
            worst = worst.max(self.components[a].apply(&self.vacuum)?.norm());
            for c in 0..n {
                let same_block = a / self.nu == c / self.nu;
                for x in vectors {
                    let (mut r1, r2) = if same_block {
                        (
                            anticommutator_apply(&self.components[a], &adj[c], x)?,
                            anticommutator_apply(&self.components[a], &self.components[c], x)?,
                        )
                    } else {
                        (
                            commutator_apply(&self.components[a], &adj[c], x)?,
                            commutator_apply(&self.components[a], &self.components[c], x)?,
                        )
                    };
                    if a == c {
                        r1.axpy(C64::new(-1.0, 0.0), x)?;
                    }
                    worst = worst.max(r1.norm()).max(r2.norm());
                }
            }
        }
        Ok(worst)
    }

    /// The three trilinear relations over every `(k, l, m)` and five seeded
    /// random vectors.
    pub fn trilinear_defect(&self) -> Result<f64> {
        self.trilinear_defect_on(&self.random_vectors(5))
    }

    pub fn trilinear_defect_on(&self, vectors: &[StateVector]) -> Result<f64> {
        let bd: Vec<LinearOperator> = self.b.iter().map(LinearOperator::adjoint).collect();
        let two = C64::new(2.0, 0.0);
        let mut worst: f64 = 0.0;
        for k in 0..self.nu {
            for l in 0..self.nu {
                for m in 0..self.nu {
                    for x in vectors {
                        // [b_k, [b_l^dagger, b_m]] = 2 delta_kl b_m
                        let mut r = nested_commutator_apply(&self.b[k], &bd[l], &self.b[m], x)?;
                        if k == l {
                            r.axpy(-two, &self.b[m].apply(x)?)?;
                        }
                        worst = worst.max(r.norm());
                        // [b_k, [b_l^dagger, b_m^dagger]] = 2 delta_kl b_m^dagger - 2 delta_km b_l^dagger
                        let mut r = nested_commutator_apply(&self.b[k], &bd[l], &bd[m], x)?;
                        if k == l {
                            r.axpy(-two, &bd[m].apply(x)?)?;
                        }
                        if k == m {
                            r.axpy(two, &bd[l].apply(x)?)?;
                        }
                        worst = worst.max(r.norm());
                        // [b_k, [b_l, b_m]] = 0
                        let r = nested_commutator_apply(&self.b[k], &self.b[l], &self.b[m], x)?;
                        worst = worst.max(r.norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// `max_{k,l} ||b_k b_l^dagger |0> - delta_kl p |0>||`.
    pub fn vacuum_condition_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for l in 0..self.nu {
            let up = self.b[l].adjoint().apply(&self.vacuum)?;
            for k in 0..self.nu {
                let mut r = self.b[k].apply(&up)?;
                if k == l {
                    r.axpy(C64::new(-(self.p as f64), 0.0), &self.vacuum)?;
                }
                worst = worst.max(r.norm());
            }
        }
        Ok(worst)
    }

    fn projector_sum(&self, sites: impl Iterator<Item = usize>) -> Result<LinearOperator> {
        let total = self.total_sites();
        let terms = sites
            .map(|s| PauliString::single(PauliLabel::NumProj, s, total))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearOperator::pauli_sum(PauliSum::new(total, terms)?))
    }

    pub fn number_ops(&self) -> Result<NumberOps> {
        let nu = self.nu;
        let total = self.projector_sum(1..=self.total_sites())?;
        let modes = (1..=nu)
            .map(|k| self.projector_sum((0..self.p).map(|a| a * nu + k)))
            .collect::<Result<_>>()?;
        let blocks = (0..self.p)
            .map(|a| self.projector_sum((1..=nu).map(|k| a * nu + k)))
            .collect::<Result<_>>()?;
        Ok(NumberOps { total, modes, blocks })
    }

    pub fn number_defects(&self, vectors: &[StateVector]) -> Result<NumberDefects> {
        let ops = self.number_ops()?;
        let half = C64::new(0.5, 0.0);
        let p = C64::new(self.p as f64, 0.0);
        let one = C64::new(1.0, 0.0);
        let mut d = NumberDefects {
            identity: 0.0,
            ladder: 0.0,
            commuting: 0.0,
            component: 0.0,
        };
        for x in vectors {
            for k in 0..self.nu {
                let bk = &self.b[k];
                let bkd = bk.adjoint();
                let nk = &ops.modes[k];
                let mut r = commutator_apply(&bkd, bk, x)?;
                r.axpy(p, x)?;
                let r = r.scale(half);
                d.identity = d.identity.max(r.distance(&nk.apply(x)?)?);

                let bx = bk.apply(x)?;
                let mut rhs = bk.apply(&nk.apply(x)?)?;
                rhs.axpy(-one, &bx)?;
                d.ladder = d.ladder.max(nk.apply(&bx)?.distance(&rhs)?);
                let bdx = bkd.apply(x)?;
                let mut rhs = bkd.apply(&nk.apply(x)?)?;
                rhs.axpy(one, &bdx)?;
                d.ladder = d.ladder.max(nk.apply(&bdx)?.distance(&rhs)?);

                for l in 0..self.nu {
                    d.commuting = d
                        .commuting
                        .max(commutator_apply(nk, &ops.modes[l], x)?.norm());
                }
            }
            for (idx, c) in self.components.iter().enumerate() {
                let n = self.projector_sum(std::iter::once(idx + 1))?;
                let cd = c.adjoint();
                let nx = n.apply(x)?;
                d.component = d.component.max(cd.apply(&c.apply(x)?)?.distance(&nx)?);
                let lhs = c.apply(&cd.apply(x)?)?;
                d.component = d.component.max(lhs.distance(&(x - &nx))?);
            }
        }
        Ok(d)
    }

    fn padded_label(&self, label: &[usize]) -> Result<Vec<usize>> {
        if let Some(pos) = label.iter().skip(self.nu).position(|&n| n > 0) {
            return Err(CcrError::IndexOutOfRange {
                index: self.nu + pos + 1,
                bound: self.nu + 1,
            });
        }
        let mut out = label.to_vec();
        out.resize(self.nu, 0);
        let total: usize = out.iter().sum();
        if total > self.excitation_cap {
            return Err(CcrError::InvalidParameter(format!(
                "label has {total} excitations, cap is {}",
                self.excitation_cap
            )));
        }
        Ok(out)
    }

    /// `b_1^dagger^n1 b_2^dagger^n2 ... |0>` scaled by `factor^(sum n)`.
    fn raised(&self, label: &[usize], ops: &[LinearOperator]) -> Result<StateVector> {
        let label = self.padded_label(label)?;
        let mut x = self.vacuum.clone();
        for k in (0..self.nu).rev() {
            let up = ops[k].adjoint();
            for _ in 0..label[k] {
                x = up.apply(&x)?;
            }
            if x.norm() < ZERO_NORM {
                return Err(CcrError::Exclusion {
                    mode: k + 1,
                    order: self.p,
                });
            }
        }
        Ok(x)
    }

    /// Normalized `|n_1, n_2, ...>`. Labels shorter than `nu` are padded
    /// with zeros.
    pub fn fock_state(&self, label: &[usize]) -> Result<StateVector> {
        self.raised(label, &self.b)?.normalized()
    }

    /// `beta_1^dagger^n1 beta_2^dagger^n2 ... |0>`, unnormalized.
    pub fn beta_word(&self, label: &[usize]) -> Result<StateVector> {
        self.raised(label, &self.beta)
    }

    fn ccr_pair(&self, k: usize, l: usize, xi: &StateVector) -> Result<(f64, f64)> {
        let bk = self.beta(k)?;
        let bl = self.beta(l)?;
        let bb = commutator_apply(bk, bl, xi)?.norm();
        let mut r = commutator_apply(bk, &bl.adjoint(), xi)?;
        if k == l {
            r.axpy(C64::new(-1.0, 0.0), xi)?;
        }
        Ok((bb, r.norm()))
    }

    /// `(||[beta_k, beta_l] xi||, ||([beta_k, beta_l^dagger] - delta_kl) xi||)`.
    pub fn ccr_defects(&self, k: usize, l: usize, xi: &StateVector) -> Result<(f64, f64)> {
        self.ccr_pair(k, l, xi)
    }

    /// Lemma 5.1 parts (i)-(iii) at modes `k != l`; part (iii) uses power `n >= 1`.
    pub fn lemma51_checks(&self, k: usize, l: usize, xi: &StateVector, n: usize) -> Result<Lemma51Record> {
        self.check_mode(k)?;
        self.check_mode(l)?;
        if k == l {
            return Err(CcrError::InvalidParameter(format!(
                "part (i) needs distinct modes, got k = l = {k}"
            )));
        }
        if n == 0 {
            return Err(CcrError::InvalidParameter("part (iii) needs n >= 1".into()));
        }
        let p = self.p as f64;
        let ops = self.number_ops()?;
        let (i_bb, i_bbdag) = self.ccr_pair(k, l, xi)?;
        let (_, ii) = self.ccr_pair(k, k, xi)?;
        let nk = ops.modes[k - 1].apply(xi)?;
        let ii_identity = 2.0 / p * nk.norm();
        let nx = ops.total.apply(xi)?;
        let n_sqr_expectation = nx.norm_sqr();
        let ii_bound = 2.0 / p * n_sqr_expectation.sqrt();

        let mut i_bb_bound = 0.0;
        let mut i_bbdag_bound = 0.0;
        for alpha in 0..self.p {
            let na = ops.blocks[alpha].apply(xi)?;
            i_bb_bound += (0.5 * xi.inner(&na)?.re.max(0.0)).sqrt();
            let nk = self.projector_sum(std::iter::once(alpha * self.nu + k))?;
            i_bbdag_bound += xi.inner(&nk.apply(xi)?)?.re.max(0.0).sqrt();
        }

        let b = self.beta(k)?;
        let bd = b.adjoint();
        let up_n = bd.apply_power(xi, n)?;
        let lhs = b.apply(&up_n)?;
        let mut rhs = bd.apply_power(&b.apply(xi)?, n)?;
        rhs.axpy(C64::new(n as f64, 0.0), &bd.apply_power(xi, n - 1)?)?;
        let iii = lhs.distance(&rhs)?;

        Ok(Lemma51Record {
            i_bb,
            i_bb_bound: 2.0 / p * i_bb_bound,
            i_bbdag,
            i_bbdag_bound: 2.0 / p * i_bbdag_bound,
            ii,
            ii_identity,
            ii_bound,
            iii,
            norm_sqr: xi.norm_sqr(),
            n_sqr_expectation,
        })
    }

    /// Largest `||([beta_k, beta_k^dagger] - 1)^2 xi - (4/p^2)(sum_alpha N_k^(alpha))^2 xi||`.
    pub fn lemma51_proof_identity_defect(&self, vectors: &[StateVector]) -> Result<f64> {
        let ops = self.number_ops()?;
        let scale = C64::new(4.0 / (self.p * self.p) as f64, 0.0);
        let one = C64::new(1.0, 0.0);
        let mut worst: f64 = 0.0;
        for k in 0..self.nu {
            let b = &self.beta[k];
            let bd = b.adjoint();
            let shifted = |x: &StateVector| -> Result<StateVector> {
                let mut r = commutator_apply(b, &bd, x)?;
                r.axpy(-one, x)?;
                Ok(r)
            };
            for x in vectors {
                let lhs = shifted(&shifted(x)?)?;
                let rhs = ops.modes[k].apply_power(x, 2)?.scale(scale);
                worst = worst.max(lhs.distance(&rhs)?);
            }
        }
        Ok(worst)
    }

    /// Lemma 5.2 defects at a Fock label.
    pub fn lemma52_checks(&self, label: &[usize]) -> Result<Lemma52Report> {
        let label = self.padded_label(label)?;
        let word = self.beta_word(&label)?;
        let norm = word.norm();
        let expected: f64 = label.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
        let xi = word.normalized()?;
        let mut modes = Vec::with_capacity(self.nu);
        for k in 0..self.nu {
            let nk = label[k] as f64;
            let b = &self.beta[k];
            let bd = b.adjoint();
            let bx = b.apply(&xi)?;
            let bdx = bd.apply(&xi)?;
            let i = bd.apply(&bx)?.distance(&xi.scale(C64::new(nk, 0.0)))?;
            let ii = b.apply(&bdx)?.distance(&xi.scale(C64::new(nk + 1.0, 0.0)))?;

            let mut up = label.clone();
            up[k] += 1;
            let iv = if up[k] > self.p || up.iter().sum::<usize>() > self.excitation_cap {
                None
            } else {
                let target = self.fock_state(&up)?.scale(C64::new((nk + 1.0).sqrt(), 0.0));
                Some(bdx.distance(&target)?)
            };
            let v = if label[k] == 0 {
                bx.norm()
            } else {
                let mut down = label.clone();
                down[k] -= 1;
                let target = self.fock_state(&down)?.scale(C64::new(nk.sqrt(), 0.0));
                bx.distance(&target)?
            };
            modes.push(ModeDefects { i, ii, iv, v });
        }
        Ok(Lemma52Report {
            label,
            norm_error: (norm - expected).abs(),
            norm,
            modes,
        })
    }

    /// `(max_k ||beta_k xi||, |<xi|0>|)` for a unit vector `xi`.
    pub fn vacuum_uniqueness_test(&self, xi: &StateVector) -> Result<(f64, f64)> {
        let norm = xi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(CcrError::NotNormalized { norm });
        }
        let mut worst: f64 = 0.0;
        for b in &self.beta {
            worst = worst.max(b.apply(xi)?.norm());
        }
        Ok((worst, self.vacuum.inner(xi)?.norm()))
    }

    /// Orthonormalized span of all creation words of length `<= max_len`,
    /// in every ordering of the modes.
    pub fn word_span(&self, max_len: usize) -> Result<WordSpan> {
        if max_len > self.excitation_cap {
            return Err(CcrError::InvalidParameter(format!(
                "word length {max_len} exceeds excitation cap {}",
                self.excitation_cap
            )));
        }
        let up: Vec<LinearOperator> = self.beta.iter().map(LinearOperator::adjoint).collect();
        let mut basis = vec![self.vacuum.clone()];
        let mut layer = vec![self.vacuum.clone()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.nu);
            for w in &layer {
                for op in &up {
                    let x = op.apply(w)?;
                    if x.norm() < ZERO_NORM {
                        continue;
                    }
                    let before = x.norm();
                    let mut r = x.clone();
                    // Two passes of modified Gram-Schmidt.
                    for _ in 0..2 {
                        for q in &basis {
                            let c = q.inner(&r)?;
                            r.axpy(-c, q)?;
                        }
                    }
                    if r.norm() > 1e-10 * before {
                        basis.push(r.normalized()?);
                    }
                    next.push(x);
                }
            }
            layer = next;
        }
        Ok(WordSpan { max_len, basis })
    }

    /// Eigen-decomposition of `sum_k beta_k^dagger beta_k` compressed to `span`.
    pub fn vacuum_spectrum(&self, span: &WordSpan, tol: f64) -> Result<VacuumSpectrum> {
        let r = span.dim();
        let images: Vec<Vec<StateVector>> = self
            .beta
            .iter()
            .map(|b| span.basis.iter().map(|q| b.apply(q)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut g = DMatrix::<C64>::zeros(r, r);
        for img in &images {
            for i in 0..r {
                for j in i..r {
                    let v = img[i].inner(&img[j])?;
                    g[(i, j)] += v;
                    if i != j {
                        g[(j, i)] += v.conj();
                    }
                }
            }
        }
        let eig = g.symmetric_eigen();
        let mut kernel = Vec::new();
        let mut gap = f64::INFINITY;
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda.abs() < tol {
                kernel.push(idx);
            } else {
                gap = gap.min(lambda);
            }
        }
        let kernel_vacuum_overlap = match kernel.as_slice() {
            // basis[0] is the vacuum.
            [only] => Some(eig.eigenvectors[(0, *only)].norm()),
            _ => None,
        };
        Ok(VacuumSpectrum {
            span_dim: r,
            kernel_dim: kernel.len(),
            kernel_vacuum_overlap,
            gap,
        })
    }

    /// Dimension of the common kernel of every `b_k` in the full space, by
    /// dense eigen-decomposition of `sum_k b_k^dagger b_k`.
    pub fn full_kernel_dimension(&self, tol: f64) -> Result<usize> {
        let mut g = DMatrix::<C64>::zeros(self.dim(), self.dim());
        for b in &self.b {
            let m = b.to_dense()?;
            g += m.adjoint() * m;
        }
        Ok(g.symmetric_eigen().eigenvalues.iter().filter(|l| l.abs() < tol).count())
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
