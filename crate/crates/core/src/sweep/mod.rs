//! Parameter sweeps over every operator family, emitting one
//! [`DefectRecord`] per (experiment, parameters, defect).

mod config;
mod record;
mod report;

pub use config::{Experiment, MuRule, OutputFormat, SweepConfig, DEFAULT_CONFIG};
pub use record::{
    format_number, read_csv, read_json, read_records, write_csv, write_json, DefectRecord,
    Outcome, CSV_HEADER, RESOURCE_SKIP,
};
pub use report::{fit_loglog_slope, report};

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::clifford::{bracket_defect, structure_constants, GammaFamily};
use crate::error::{CcrError, Result};
use crate::linalg::{random_unit_vectors, seeded_rng, StateVector, C64, DENSIFY_CAP};
use crate::parafermi::{GreenSystem, DEFAULT_EXCITATION_CAP};
use crate::spin::SpinRep;
use crate::weyl::{heisenberg_rep, plateau_clock_bound, plateau_shift_defect, root_of_unity, HeisenbergElement, WeylPair};

/// Process exit status of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    AllPass,
    Failure,
    ResourceRefusal,
}

impl SweepStatus {
    pub fn from_records(records: &[DefectRecord]) -> Self {
        if records.iter().any(|r| r.outcome == Outcome::Fail) {
            Self::Failure
        } else if records.iter().any(|r| r.outcome.is_resource_skip()) {
            Self::ResourceRefusal
        } else {
            Self::AllPass
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Self::AllPass => 0,
            Self::Failure => 1,
            Self::ResourceRefusal => 3,
        }
    }
}

/// Runs every battery selected by `cfg`. Grid points are evaluated in
/// parallel; the output order depends only on the configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(Vec<DefectRecord>, SweepStatus)> {
    cfg.validate()?;
    let mut records = Vec::new();
    for e in cfg.experiment.expand() {
        records.extend(match e {
            Experiment::Weyl => weyl_battery(cfg),
            Experiment::Spin => spin_battery(cfg),
            Experiment::Clifford => clifford_battery(cfg),
            Experiment::Parafermi => parafermi_battery(cfg),
            Experiment::All => unreachable!("expanded above"),
        }?);
    }
    let status = SweepStatus::from_records(&records);
    Ok((records, status))
}

fn skip_reason(e: &CcrError) -> String {
    match e {
        CcrError::ResourceCap { .. } => format!("{RESOURCE_SKIP}: {e}"),
        _ => e.to_string(),
    }
}

/// Evaluates `points` in parallel and concatenates their records in order.
fn par_points<T: Sync>(points: &[T], f: impl Fn(&T) -> Result<Vec<DefectRecord>> + Sync + Send) -> Result<Vec<DefectRecord>> {
    let parts: Vec<Result<Vec<DefectRecord>>> = points.par_iter().map(f).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn weyl_battery(cfg: &SweepConfig) -> Result<Vec<DefectRecord>> {
    const E: &str = "weyl";
    let tol = Some(cfg.tol);
    par_points(&cfg.weyl_nu, |&nu| {
        let params = format!("nu={nu}");
        let pair = WeylPair::new(nu)?;
        let vectors = random_unit_vectors(nu, cfg.samples, cfg.seed);
        let omega = root_of_unity(nu, 1);
        let mut out = Vec::new();

        let mut relation: f64 = 0.0;
        let mut factorization: f64 = 0.0;
        for x in &vectors {
            let uv = pair.u().apply(&pair.v().apply(x)?)?;
            let vu = pair.v().apply(&pair.u().apply(x)?)?;
            relation = relation.max(uv.distance(&vu.scale(omega))?);
        }
        for m in 1..=3 {
            let um = pair.clock_power(m);
            for n in 1..=3 {
                let vn = pair.shift_power(n);
                let factor = root_of_unity(nu, (m * n) as i128) - 1.0;
                for x in &vectors {
                    let lhs = crate::linalg::commutator_apply(&um, &vn, x)?;
                    let rhs = vn.apply(&um.apply(x)?)?.scale(factor);
                    factorization = factorization.max(lhs.distance(&rhs)?);
                }
            }
        }
        out.push(DefectRecord::measured(E, params.clone(), "weyl-relation", relation, tol));
        out.push(DefectRecord::measured(E, params.clone(), "commutator-factorization", factorization, tol));

        let mut rng = seeded_rng(cfg.seed);
        let mut hom: f64 = 0.0;
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let n = nu as i64;
            HeisenbergElement::new(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n), nu)
        };
        for _ in 0..100 {
            let g = draw(&mut rng)?;
            let h = draw(&mut rng)?;
            let x = StateVector::random_unit(nu, &mut rng);
            let lhs = heisenberg_rep(&pair, &g)?.apply(&heisenberg_rep(&pair, &h)?.apply(&x)?)?;
            let rhs = heisenberg_rep(&pair, &g.mul(&h)?)?.apply(&x)?;
            hom = hom.max(lhs.distance(&rhs)?);
        }
        out.push(DefectRecord::measured(E, params, "heisenberg-hom", hom, tol));

        let mu = cfg.weyl_mu.window(nu);
        for &l in &cfg.weyl_l {
            let params = format!("nu={nu};mu={mu};l={l}");
            let plateau = match pair.plateau_vector(l, mu) {
                Ok(v) => v,
                Err(e) => {
                    out.push(DefectRecord::skipped(E, params, "plateau", skip_reason(&e)));
                    continue;
                }
            };
            let shift = pair.v().apply(&plateau)?.distance(&plateau)?;
            out.push(DefectRecord::measured(
                E,
                params.clone(),
                "plateau-shift",
                (shift - plateau_shift_defect(mu)).abs(),
                tol,
            ));
            let clock = pair.u().apply(&plateau)?.distance(&plateau)?;
            out.push(DefectRecord::measured(
                E,
                params.clone(),
                "plateau-clock",
                clock,
                Some(plateau_clock_bound(nu, mu, l) + cfg.tol),
            ));
            let d = pair.ccr_defect(1, 1, &plateau)?;
            out.push(DefectRecord::measured(E, params.clone(), "thm2.4-group", d.group, None));
            out.push(DefectRecord::measured(E, params, "quadrature-ccr", d.quadrature, None));
        }
        Ok(out)
    })
}

fn spin_battery(cfg: &SweepConfig) -> Result<Vec<DefectRecord>> {
    const E: &str = "spin";
    let tol = Some(cfg.tol);
    let mut out = par_points(&cfg.spin_p, |&p| {
        let rep = SpinRep::new(p)?;
        let mut out = Vec::new();
        for &k in &cfg.spin_k {
            let params = format!("p={p};k={k}");
            if k > p {
                out.push(DefectRecord::skipped(E, params, "thm3.1", format!("k = {k} exceeds p = {p}")));
                continue;
            }
            let expected = k as f64 / rep.j();
            out.push(DefectRecord::measured(
                E,
                params,
                "thm3.1",
                rep.theorem31_defect(k)?,
                Some(expected + cfg.tol),
            ));
        }
        for &theta in cfg.spin_theta.iter().flatten() {
            let d = rep.covariance_defect_seeded(theta, cfg.samples, cfg.seed)?;
            out.push(DefectRecord::measured(E, format!("p={p};theta={theta}"), "covariance", d, tol));
        }
        Ok(out)
    })?;
    if let Some(zs) = &cfg.spin_z {
        out.extend(par_points(&cfg.spin_coherent_p, |&p| {
            let rep = SpinRep::new(p)?;
            let mut out = Vec::new();
            for &z in zs {
                let kmax = cfg.spin_kmax.min(p);
                let errors = rep.coherent_limit_error(C64::new(z, 0.0), kmax)?;
                for k in 0..=cfg.spin_kmax {
                    let params = format!("p={p};z={z};k={k}");
                    out.push(match errors.get(k) {
                        Some(&err) => DefectRecord::measured(E, params, "coherent-limit", err, None),
                        None => DefectRecord::skipped(E, params, "coherent-limit", format!("k = {k} exceeds p = {p}")),
                    });
                }
            }
            Ok(out)
        })?);
    }
    Ok(out)
}

/// Largest `nu` for dense structure-constant extraction.
const BRACKET_DENSE_MAX_NU: usize = DENSIFY_CAP.trailing_zeros() as usize;

fn clifford_battery(cfg: &SweepConfig) -> Result<Vec<DefectRecord>> {
    const E: &str = "clifford";
    let tol = Some(cfg.tol);
    let mut out = par_points(&cfg.clifford_nu, |&nu| {
        let params = format!("nu={nu}");
        if nu > cfg.site_cap {
            let e = CcrError::ResourceCap {
                what: format!("gamma family on {nu} sites"),
                required_bytes: 16u128 << nu.min(127),
                budget_bytes: 16u128 << cfg.site_cap,
            };
            return Ok(vec![DefectRecord::skipped(E, params, "clifford-anticomm", skip_reason(&e))]);
        }
        let fam = GammaFamily::new(nu)?;
        let d = if nu <= cfg.clifford_dense_max {
            fam.dense_anticommutation_defect()?
        } else {
            fam.anticommutation_defect(&random_unit_vectors(fam.dim(), cfg.samples, cfg.seed))?
        };
        Ok(vec![DefectRecord::measured(E, params, "clifford-anticomm", d, tol)])
    })?;

    if let Some(nus) = &cfg.clifford_bracket_nu {
        let points: Vec<(usize, usize)> = nus
            .iter()
            .flat_map(|&nu| cfg.clifford_p.iter().map(move |&p| (nu, p)))
            .collect();
        out.extend(par_points(&points, |&(nu, p)| {
            let params = format!("nu={nu};p={p}");
            if nu > BRACKET_DENSE_MAX_NU {
                let e = CcrError::ResourceCap {
                    what: "dense structure-constant extraction".into(),
                    required_bytes: 16u128 << (2 * nu).min(127),
                    budget_bytes: 16u128 << (2 * BRACKET_DENSE_MAX_NU),
                };
                return Ok(vec![DefectRecord::skipped(E, params, "so-bracket", skip_reason(&e))]);
            }
            let fam = GammaFamily::new(nu)?;
            let constants = structure_constants(&fam)?;
            let budget = 16u128 << cfg.site_cap;
            let mut ops = BTreeMap::new();
            for i in 1..=fam.n() {
                for j in i + 1..=fam.n() {
                    match fam.tensor_sum_rep_with_budget(p, (i, j), budget) {
                        Ok(op) => {
                            ops.insert((i, j), op);
                        }
                        Err(e @ CcrError::ResourceCap { .. }) => {
                            return Ok(vec![DefectRecord::skipped(E, params, "so-bracket", skip_reason(&e))]);
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            let dim = 1usize << (p * nu);
            let d = bracket_defect(&ops, &constants, &random_unit_vectors(dim, cfg.samples, cfg.seed))?;
            Ok(vec![
                DefectRecord::measured(E, params.clone(), "so-closure", constants.closure_residual, tol),
                DefectRecord::measured(E, params, "so-bracket", d, tol),
            ])
        })?);
    }
    Ok(out)
}

fn parafermi_battery(cfg: &SweepConfig) -> Result<Vec<DefectRecord>> {
    const E: &str = "parafermi";
    let tol = Some(cfg.tol);
    let points: Vec<(usize, usize)> = cfg
        .parafermi_p
        .iter()
        .flat_map(|&p| cfg.parafermi_nu.iter().map(move |&nu| (p, nu)))
        .collect();
    par_points(&points, |&(p, nu)| {
        let params = format!("p={p};nu={nu}");
        let sys = match GreenSystem::with_caps(p, nu, cfg.site_cap, DEFAULT_EXCITATION_CAP) {
            Ok(s) => s,
            Err(e @ CcrError::ResourceCap { .. }) => {
                return Ok(vec![DefectRecord::skipped(E, params, "all", skip_reason(&e))]);
            }
            Err(e) => return Err(e),
        };
        let vectors = random_unit_vectors(sys.dim(), cfg.samples, cfg.seed);
        let mut out = vec![
            DefectRecord::measured(E, params.clone(), "green", sys.green_defect(&vectors)?, tol),
            DefectRecord::measured(E, params.clone(), "trilinear", sys.trilinear_defect_on(&vectors)?, tol),
            DefectRecord::measured(E, params.clone(), "vacuum-condition", sys.vacuum_condition_defect()?, tol),
        ];
        let nd = sys.number_defects(&vectors)?;
        for (name, v) in [
            ("number-identity", nd.identity),
            ("number-ladder", nd.ladder),
            ("number-commute", nd.commuting),
            ("number-component", nd.component),
            ("lemma5.1-identity", sys.lemma51_proof_identity_defect(&vectors)?),
        ] {
            out.push(DefectRecord::measured(E, params.clone(), name, v, tol));
        }

        let span_len = cfg.parafermi_span.min(sys.excitation_cap());
        let span = sys.word_span(span_len)?;
        let spec = sys.vacuum_spectrum(&span, 1e-10)?;
        let vac = match spec.kernel_vacuum_overlap {
            Some(o) => 1.0 - o,
            None => spec.kernel_dim as f64,
        };
        let span_params = format!("{params};span={span_len}");
        out.push(DefectRecord::measured(E, span_params.clone(), "thm5.3-vacuum", vac, tol));
        out.push(DefectRecord::measured(E, span_params, "thm5.3-gap", spec.gap, None));

        let ops = sys.number_ops()?;
        for label in &cfg.parafermi_labels {
            let tag = label.iter().map(usize::to_string).collect::<Vec<_>>().join(":");
            let params = format!("{params};label={tag}");
            let xi = match sys.fock_state(label) {
                Ok(x) => x,
                Err(e) => {
                    out.push(DefectRecord::skipped(E, params, "lemma5.2", skip_reason(&e)));
                    continue;
                }
            };
            let pf = p as f64;
            let (_, ii) = sys.ccr_defects(1, 1, &xi)?;
            let n1 = ops.modes[0].apply(&xi)?.norm();
            let n_total = ops.total.apply(&xi)?.norm();
            out.push(DefectRecord::measured(
                E,
                params.clone(),
                "lemma5.1-ii",
                ii,
                Some(2.0 / pf * n_total + cfg.tol),
            ));
            out.push(DefectRecord::measured(
                E,
                params.clone(),
                "lemma5.1-ii-identity",
                (ii - 2.0 / pf * n1).abs(),
                tol,
            ));
            if nu >= 2 {
                let rec = sys.lemma51_checks(1, 2, &xi, 1)?;
                out.push(DefectRecord::measured(
                    E,
                    params.clone(),
                    "lemma5.1-i-bb",
                    rec.i_bb,
                    Some(rec.i_bb_bound + cfg.tol),
                ));
                out.push(DefectRecord::measured(
                    E,
                    params.clone(),
                    "lemma5.1-i-bbdag",
                    rec.i_bbdag,
                    Some(rec.i_bbdag_bound + cfg.tol),
                ));
                out.push(DefectRecord::measured(E, params.clone(), "lemma5.1-iii", rec.iii, None));
            }
            out.push(DefectRecord::measured(
                E,
                params.clone(),
                "lemma5.2",
                sys.lemma52_checks(label)?.worst(),
                None,
            ));
            let mut ccr: f64 = 0.0;
            for k in 1..=nu.min(2) {
                for l in 1..=nu.min(2) {
                    let (a, b) = sys.ccr_defects(k, l, &xi)?;
                    ccr = ccr.max(a).max(b);
                }
            }
            out.push(DefectRecord::measured(E, params, "thm5.3-ccr", ccr, None));
        }
        Ok(out)
    })
}
