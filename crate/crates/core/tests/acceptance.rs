//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccr_core::clifford::GammaFamily;
use ccr_core::linalg::{random_unit_vectors, seeded_rng, StateVector, C64, DEFAULT_SEED};
use ccr_core::parafermi::GreenSystem;
use ccr_core::spin::SpinRep;
use ccr_core::weyl::{
    default_window, heisenberg_rep, plateau_clock_bound, plateau_shift_defect, root_of_unity,
    HeisenbergElement, WeylPair,
};
use ccr_core::Result;
use rand::Rng;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { ok, detail })
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

// Exactly vanishing defects come back as roundoff of a few ulps.
fn nonincreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + 1e-14)
}

fn weyl_relation() -> Result<Verdict> {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for nu in [2, 16, 256, 4096] {
        let pair = WeylPair::new(nu)?;
        let omega = root_of_unity(nu, 1);
        for x in random_unit_vectors(nu, 10, DEFAULT_SEED) {
            let uv = pair.u().apply(&pair.v().apply(&x)?)?;
            let vu = pair.v().apply(&pair.u().apply(&x)?)?;
            worst = worst.max(uv.distance(&vu.scale(omega))?);
        }
    }
    let el = t.elapsed();
    verdict(worst <= 1e-12 && within(el, 1.0), format!("max defect {worst:.2e}, {el:.2?}"))
}

fn plateau() -> Result<Verdict> {
    let t = Instant::now();
    let (mut shift_err, mut clock_ok, mut group): (f64, bool, Vec<Vec<f64>>) = (0.0, true, vec![vec![]; 3]);
    for nu in [1 << 10, 1 << 14, 1 << 18] {
        let pair = WeylPair::new(nu)?;
        let mu = default_window(nu);
        for l in 0..3 {
            let x = pair.plateau_vector(l, mu)?;
            let shift = pair.v().apply(&x)?.distance(&x)?;
            shift_err = shift_err.max((shift - plateau_shift_defect(mu)).abs());
            let clock = pair.u().apply(&x)?.distance(&x)?;
            clock_ok &= clock <= plateau_clock_bound(nu, mu, l);
            group[l].push(pair.group_defect(1, 1, &x)?);
        }
    }
    let el = t.elapsed();
    let monotone = group.iter().all(|g| nonincreasing(g));
    verdict(
        shift_err <= 1e-12 && clock_ok && monotone && within(el, 10.0),
        format!(
            "shift error {shift_err:.2e}, clock bound held: {clock_ok}, group defect l=0 {:.3e} -> {:.3e} -> {:.3e}, {el:.2?}",
            group[0][0], group[0][1], group[0][2]
        ),
    )
}

fn factorization() -> Result<Verdict> {
    let nu = 1024;
    let pair = WeylPair::new(nu)?;
    let mut worst: f64 = 0.0;
    for x in random_unit_vectors(nu, 10, DEFAULT_SEED) {
        for m in 1..=3 {
            for n in 1..=3 {
                worst = worst.max(pair.commutator_factorization_defect(m, n, &x)?);
            }
        }
    }
    verdict(worst <= 1e-12, format!("max defect {worst:.2e}"))
}

fn homomorphism() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut rng = seeded_rng(DEFAULT_SEED);
    for nu in [4usize, 16, 64] {
        let pair = WeylPair::new(nu)?;
        let n = nu as i64;
        for _ in 0..100 {
            let g = HeisenbergElement::new(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n), nu)?;
            let h = HeisenbergElement::new(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n), nu)?;
            let x = StateVector::random_unit(nu, &mut rng);
            let lhs = heisenberg_rep(&pair, &g)?.apply(&heisenberg_rep(&pair, &h)?.apply(&x)?)?;
            let rhs = heisenberg_rep(&pair, &g.mul(&h)?)?.apply(&x)?;
            worst = worst.max(lhs.distance(&rhs)?);
        }
    }
    verdict(worst <= 1e-12, format!("max defect {worst:.2e} over 300 pairs"))
}

fn theorem31() -> Result<Verdict> {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for p in [10, 100, 1000] {
        let rep = SpinRep::new(p)?;
        for k in 0..=5 {
            worst = worst.max((rep.theorem31_defect(k)? - k as f64 / rep.j()).abs());
        }
    }
    let el = t.elapsed();
    verdict(worst <= 1e-12 && within(el, 1.0), format!("max |defect - k/j| {worst:.2e}, {el:.2?}"))
}

fn covariance() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for p in [1, 2, 10, 100] {
        let rep = SpinRep::new(p)?;
        for i in 0..16 {
            let theta = std::f64::consts::TAU * i as f64 / 16.0;
            worst = worst.max(rep.covariance_defect(theta)?);
        }
    }
    verdict(worst <= 1e-10, format!("max defect {worst:.2e} over 64 (p, theta)"))
}

fn coherent_limit() -> Result<Verdict> {
    let ps = [100, 300, 1000, 3000];
    let mut errs = vec![Vec::new(); 6];
    for p in ps {
        let e = SpinRep::new(p)?.coherent_limit_error(C64::new(1.0, 0.0), 5)?;
        for k in 0..=5 {
            errs[k].push(e[k]);
        }
    }
    let monotone = errs.iter().all(|e| e.windows(2).all(|w| w[1] < w[0]));
    let last = errs.iter().map(|e| e[3]).fold(0.0, f64::max);
    verdict(
        monotone && last <= 1e-2,
        format!("strictly decreasing: {monotone}, max error at p=3000 {last:.2e}"),
    )
}

fn clifford() -> Result<Verdict> {
    let t = Instant::now();
    let mut dense: f64 = 0.0;
    for nu in 1..=6 {
        dense = dense.max(GammaFamily::new(nu)?.dense_anticommutation_defect()?);
    }
    let mut random: f64 = 0.0;
    for nu in 1..=16 {
        let fam = GammaFamily::new(nu)?;
        random = random.max(fam.anticommutation_defect(&random_unit_vectors(fam.dim(), 3, DEFAULT_SEED))?);
    }
    let el = t.elapsed();
    verdict(
        dense <= 1e-12 && random <= 1e-12 && within(el, 30.0),
        format!("exhaustive nu<=6 {dense:.2e}, random nu<=16 {random:.2e}, {el:.2?}"),
    )
}

fn parafermi() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut at_16 = Duration::ZERO;
    for (p, nu) in [(1, 1), (2, 1), (2, 2), (3, 2), (4, 2), (8, 2)] {
        let t = Instant::now();
        let sys = GreenSystem::new(p, nu)?;
        let v = random_unit_vectors(sys.dim(), 5, DEFAULT_SEED);
        let nd = sys.number_defects(&v)?;
        for d in [
            sys.green_defect(&v)?,
            sys.trilinear_defect_on(&v)?,
            sys.vacuum_condition_defect()?,
            nd.identity,
        ] {
            worst = worst.max(d);
        }
        if p * nu == 16 {
            at_16 = t.elapsed();
        }
    }
    verdict(
        worst <= 1e-10 && within(at_16, 120.0),
        format!("max defect {worst:.2e}, p*nu=16 took {at_16:.2?}"),
    )
}

fn bose_emergence() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for p in [2usize, 4, 8] {
        let sys = GreenSystem::new(p, 2)?;
        let xi = sys.fock_state(&[1, 1])?;
        let (_, ii) = sys.ccr_defects(1, 1, &xi)?;
        worst = worst.max((ii - 2.0 / p as f64).abs());
        values.push(ii);

        let closed = (2.0 * (1.0 - 1.0 / p as f64)).sqrt();
        let direct = sys.beta_word(&[2])?.norm();
        // (1/p) sum_{a != b} b~^(a) dagger b~^(b) dagger |0>
        let mut green = StateVector::zeros(sys.dim());
        for a in 1..=p {
            for b in (1..=p).filter(|&b| b != a) {
                let x = sys.component(1, b)?.adjoint().apply(sys.vacuum())?;
                let x = sys.component(1, a)?.adjoint().apply(&x)?;
                green.axpy(C64::new(1.0 / p as f64, 0.0), &x)?;
            }
        }
        worst = worst.max((direct - closed).abs()).max((green.norm() - closed).abs());
    }
    verdict(
        worst <= 1e-10,
        format!(
            "defects {:.12} {:.12} {:.12}, max deviation {worst:.2e}",
            values[0], values[1], values[2]
        ),
    )
}

/// The limit statements themselves are out of reach; their finite stand-ins
/// are the monotone and bounded defect sequences checked here together with
/// the exact identities above.
fn finite_substitutes() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    // Labels with n_1 + n_2 <= 3. A label whose occupation reaches the order
    // p sits on the exclusion boundary, where beta^dagger can annihilate it
    // and the defect drops to zero; monotonicity is checked over the orders
    // with every n_k < p, the bounds at every order.
    let labels: Vec<Vec<usize>> = (0..=3usize)
        .flat_map(|a| (0..=3 - a).map(move |b| vec![a, b]))
        .filter(|l| l.iter().sum::<usize>() > 0)
        .collect();
    let systems: Vec<GreenSystem> = [2, 4, 8].iter().map(|&p| GreenSystem::new(p, 2)).collect::<Result<_>>()?;
    let mut boundary_points = 0;
    for label in &labels {
        let saturation = *label.iter().max().unwrap_or(&0);
        for k in 1..=2 {
            for l in 1..=2 {
                let mut bb = Vec::new();
                let mut bbd = Vec::new();
                for sys in &systems {
                    let Ok(xi) = sys.fock_state(label) else { continue };
                    let (a, b) = sys.ccr_defects(k, l, &xi)?;
                    let pf = sys.p() as f64;
                    let n = sys.number_ops()?.total.apply(&xi)?.norm();
                    let bound = if k == l {
                        2.0 / pf * n
                    } else {
                        let rec = sys.lemma51_checks(k, l, &xi, 1)?;
                        ok &= rec.i_bb <= rec.i_bb_bound + 1e-12;
                        rec.i_bbdag_bound
                    };
                    ok &= b <= bound + 1e-12;
                    if saturation < sys.p() {
                        bb.push(a);
                        bbd.push(b);
                    } else {
                        boundary_points += 1;
                    }
                }
                ok &= nonincreasing(&bb) && nonincreasing(&bbd);
            }
        }
    }
    notes.push(format!(
        "thm5.3 defects bounded, monotone off the exclusion boundary ({boundary_points} boundary points): {ok}"
    ));

    let mut uniq = true;
    for sys in &systems {
        let spec = sys.vacuum_spectrum(&sys.word_span(3)?, 1e-10)?;
        uniq &= spec.kernel_dim == 1 && (spec.kernel_vacuum_overlap.unwrap_or(0.0) - 1.0).abs() < 1e-10;
    }
    notes.push(format!("vacuum unique in word span: {uniq}"));
    ok &= uniq;

    let s = GreenSystem::new(2, 2)?;
    let small = s.word_span(2)?;
    let big = s.word_span(3)?;
    let mut residual: f64 = 0.0;
    for q in &small.basis {
        for k in 1..=2 {
            let b = s.beta(k)?;
            residual = residual.max(big.residual(&b.apply(q)?)?).max(big.residual(&b.adjoint().apply(q)?)?);
        }
    }
    notes.push(format!("span invariance residual {residual:.1e}"));
    ok &= residual <= 1e-10;

    let pair_small = WeylPair::new(256)?;
    let pair_big = WeylPair::new(4096)?;
    let d_small = pair_small.group_defect(1, 1, &pair_small.plateau_vector(0, 16)?)?;
    let d_big = pair_big.group_defect(1, 1, &pair_big.plateau_vector(0, 64)?)?;
    let sharp = WeylPair::new(64)?;
    let d_sharp = sharp.group_defect(1, 1, &StateVector::basis(64, 0)?)?;
    ok &= d_big <= 0.2 && d_big < d_small && d_sharp > 0.5;
    notes.push(format!("weyl plateau {d_small:.3} -> {d_big:.3}, sharp {d_sharp:.3}"));

    verdict(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Verdict>); 11] = [
        ("exact Weyl relation", weyl_relation),
        ("plateau defects", plateau),
        ("commutator factorization", factorization),
        ("Heisenberg homomorphism", homomorphism),
        ("spin commutator defect k/j", theorem31),
        ("rotation covariance", covariance),
        ("coherent limit", coherent_limit),
        ("Clifford anticommutation", clifford),
        ("parafermi exactness", parafermi),
        ("Bose emergence", bose_emergence),
        ("finite substitutes for limit statements", finite_substitutes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match check() {
            Ok(v) => (v.ok, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {:<40} {}  {detail}", i + 1, name, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
