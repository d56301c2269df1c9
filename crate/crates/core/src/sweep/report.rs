use std::collections::BTreeMap;
use std::fmt::Write;

use super::record::{DefectRecord, Outcome};

/// Defects that only vanish in a limit; the report fits their decay rate.
const ASYMPTOTIC: [&str; 8] = [
    "thm3.1",
    "thm2.4-group",
    "quadrature-ccr",
    "coherent-limit",
    "lemma5.1-ii",
    "lemma5.1-iii",
    "lemma5.2",
    "thm5.3-ccr",
];

/// Parameters that are functions of the dimension parameter (the plateau
/// window), left out of the series key.
const DERIVED: [&str; 1] = ["mu"];

const SPIN_NOTES: [&str; 2] = [
    "rotation covariance is asserted as e^{-i theta J3} Q e^{i theta J3} = Q cos(theta) + P sin(theta); \
     the opposite ordering of the rotation gives the sign-flipped convention",
    "boson coherent amplitudes use e^{-|z|^2/2} z^k / sqrt(k!); a plain k! in the denominator is not normalizable",
];

/// Least-squares slope of `ln y` against `ln x` over points with positive
/// coordinates; `None` for fewer than two distinct `x`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
}

/// Human-readable summary: per experiment, the pass/fail/skip counts, the
/// worst value of each defect, and log-log slopes of asymptotic defects
/// against the first parameter.
pub fn report(records: &[DefectRecord]) -> String {
    let mut out = String::new();
    if records.is_empty() {
        out.push_str("no records\n");
        return out;
    }
    let mut by_exp: BTreeMap<&str, Vec<&DefectRecord>> = BTreeMap::new();
    for r in records {
        by_exp.entry(r.experiment.as_str()).or_default().push(r);
    }
    for (exp, recs) in &by_exp {
        let count = |f: fn(&Outcome) -> bool| recs.iter().filter(|r| f(&r.outcome)).count();
        let pass = count(|o| *o == Outcome::Pass);
        let fail = count(|o| *o == Outcome::Fail);
        let skip = count(|o| matches!(o, Outcome::Skipped(_)));
        let _ = writeln!(out, "== {exp}: {} records, {pass} pass, {fail} fail, {skip} skipped", recs.len());

        let mut worst: BTreeMap<&str, (f64, &DefectRecord)> = BTreeMap::new();
        for r in recs {
            if let Some(m) = r.measured {
                let e = worst.entry(r.defect.as_str()).or_insert((m, r));
                if m > e.0 {
                    *e = (m, r);
                }
            }
        }
        for (name, (m, r)) in &worst {
            let _ = writeln!(
                out,
                "  worst {name:<26} {m:.3e} at {} (bound {}, {})",
                r.params,
                fmt_opt(r.bound),
                r.outcome
            );
        }

        // Series: same defect and same parameters apart from the first.
        let mut series: BTreeMap<(&str, String, String), Vec<(f64, f64)>> = BTreeMap::new();
        for r in recs.iter().filter(|r| ASYMPTOTIC.contains(&r.defect.as_str())) {
            let pairs = r.param_pairs();
            let Some(&(key, value)) = pairs.first() else { continue };
            let (Ok(x), Some(y)) = (value.parse::<f64>(), r.measured) else { continue };
            let rest = pairs[1..]
                .iter()
                .filter(|(k, _)| !DERIVED.contains(k))
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            series.entry((r.defect.as_str(), key.to_string(), rest)).or_default().push((x, y));
        }
        for ((name, key, rest), pts) in &series {
            let slope = fit_loglog_slope(pts).map_or_else(|| "n/a".to_string(), |s| format!("{s:+.3}"));
            let at = if rest.is_empty() { String::new() } else { format!(" [{rest}]") };
            let _ = writeln!(out, "  slope {name}{at} vs {key}: {slope} ({} points)", pts.len());
        }
        if *exp == "spin" {
            for note in SPIN_NOTES {
                let _ = writeln!(out, "  note: {note}");
            }
        }
    }
    let fails: Vec<&DefectRecord> = records.iter().filter(|r| r.outcome == Outcome::Fail).collect();
    if !fails.is_empty() {
        let _ = writeln!(out, "== failures");
        for r in fails {
            let _ = writeln!(
                out,
                "  {} {} {}: {} > {}",
                r.experiment,
                r.params,
                r.defect,
                fmt_opt(r.measured),
                fmt_opt(r.bound)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&p| (p, 6.0 / p)).collect();
        assert!((fit_loglog_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(fit_loglog_slope(&pts[..1]), None);
        assert_eq!(fit_loglog_slope(&[(1.0, 0.0), (2.0, 0.0)]), None);
    }

    #[test]
    fn single_record_slope_is_na() {
        let r = DefectRecord::measured("weyl", "nu=1024;mu=32;l=0".into(), "thm2.4-group", 0.2, None);
        let text = report(&[r]);
        assert!(text.contains("slope thm2.4-group [l=0] vs nu: n/a (1 points)"), "{text}");
    }
}
