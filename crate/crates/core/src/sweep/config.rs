use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CcrError, Result};
use crate::linalg::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    Weyl,
    Spin,
    Clifford,
    Parafermi,
    All,
}

impl Experiment {
    pub const SINGLE: [Experiment; 4] = [Self::Weyl, Self::Spin, Self::Clifford, Self::Parafermi];

    pub fn name(self) -> &'static str {
        match self {
            Self::Weyl => "weyl",
            Self::Spin => "spin",
            Self::Clifford => "clifford",
            Self::Parafermi => "parafermi",
            Self::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Experiment> {
        match self {
            Self::All => Self::SINGLE.to_vec(),
            e => vec![e],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CcrError;

    fn from_str(s: &str) -> Result<Self> {
        Self::SINGLE
            .into_iter()
            .chain([Self::All])
            .find(|e| e.name() == s)
            .ok_or_else(|| usage(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CcrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(usage(format!("unknown format {s:?}"))),
        }
    }
}

/// Plateau window size as a function of `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuRule {
    /// `floor(sqrt(nu))`
    Sqrt,
    Fixed(usize),
}

impl MuRule {
    pub fn window(self, nu: usize) -> usize {
        match self {
            Self::Sqrt => crate::weyl::default_window(nu),
            Self::Fixed(mu) => mu,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub weyl_nu: Vec<usize>,
    pub weyl_mu: MuRule,
    pub weyl_l: Vec<usize>,
    pub spin_p: Vec<usize>,
    pub spin_k: Vec<usize>,
    /// Rotation angles for the covariance battery; skipped when absent.
    pub spin_theta: Option<Vec<f64>>,
    /// Real coherent parameters for the boson-limit battery; skipped when absent.
    pub spin_z: Option<Vec<f64>>,
    pub spin_coherent_p: Vec<usize>,
    pub spin_kmax: usize,
    pub clifford_nu: Vec<usize>,
    /// Generator counts for the `so(2nu+1)` bracket battery; skipped when absent.
    pub clifford_bracket_nu: Option<Vec<usize>>,
    /// Tensor powers for the bracket battery.
    pub clifford_p: Vec<usize>,
    /// Above this `nu` the anticommutators are checked on random vectors.
    pub clifford_dense_max: usize,
    pub parafermi_p: Vec<usize>,
    pub parafermi_nu: Vec<usize>,
    pub parafermi_labels: Vec<Vec<usize>>,
    pub parafermi_span: usize,
    pub site_cap: usize,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<String>,
    pub format: OutputFormat,
}

pub const DEFAULT_CONFIG: &str = "\
experiment = all
weyl.nu = 1024, 4096, 16384, 65536, 262144
weyl.mu = sqrt
weyl.l = 0..2
spin.p = 10, 100, 1000
spin.k = 0..5
spin.theta = uniform:16
spin.z = 1.0
spin.coherent_p = 100, 300, 1000, 3000
spin.kmax = 5
clifford.nu = 1..16
clifford.bracket_nu = 1..3
clifford.p = 1..3
clifford.dense_max = 6
parafermi.p = 1, 2, 3, 4, 8
parafermi.nu = 1, 2
parafermi.labels = 1, 2, 1:1
parafermi.span = 2
";

fn usage(msg: String) -> CcrError {
    CcrError::InvalidParameter(msg)
}

fn parse_scalar<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| usage(format!("{key}: cannot parse {v:?}")))
}

/// Comma-separated integers with inclusive `a..b` ranges; sorted and deduplicated.
fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let (a, b): (usize, usize) = (parse_scalar(key, a)?, parse_scalar(key, b)?);
            if a > b {
                return Err(usage(format!("{key}: empty range {item}")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_scalar(key, item)?);
        }
    }
    if out.is_empty() {
        return Err(usage(format!("{key}: list is empty")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Comma-separated reals, or `uniform:n` for `2 pi i / n`, `i < n`.
fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if let Some(n) = v.trim().strip_prefix("uniform:") {
        let n: usize = parse_scalar(key, n)?;
        if n == 0 {
            return Err(usage(format!("{key}: list is empty")));
        }
        return Ok((0..n).map(|i| std::f64::consts::TAU * i as f64 / n as f64).collect());
    }
    let mut out = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_scalar::<f64>(key, s))
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(usage(format!("{key}: list is empty")));
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err(usage(format!("{key}: values must be finite")));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Fock labels such as `1, 2, 1:1`; each label lists occupations by mode.
fn parse_labels(key: &str, v: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.split(':').map(|n| parse_scalar(key, n)).collect::<Result<Vec<usize>>>())
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        return Err(usage(format!("{key}: list is empty")));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("line {}: expected key = value", no + 1)))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(usage(format!("line {}: duplicate key {}", no + 1, k.trim())));
        }
    }
    Ok(map)
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("built-in config parses")
    }
}

impl SweepConfig {
    /// Parses flat `key = value` text. Required grids missing from the text
    /// take built-in values; optional batteries run only when their key is
    /// present.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = parse_pairs(text)?;
        let defaults = parse_pairs(DEFAULT_CONFIG)?;
        let mut take = |key: &str, required: bool| -> Option<String> {
            map.remove(key)
                .or_else(|| required.then(|| defaults.get(key).cloned()).flatten())
        };
        let req = |v: Option<String>| v.expect("default present");

        let experiment = parse_scalar::<String>("experiment", &req(take("experiment", true)))?.parse()?;
        let weyl_nu = parse_usize_list("weyl.nu", &req(take("weyl.nu", true)))?;
        let weyl_mu = match req(take("weyl.mu", true)).as_str() {
            "sqrt" => MuRule::Sqrt,
            v => MuRule::Fixed(parse_scalar("weyl.mu", v)?),
        };
        let weyl_l = parse_usize_list("weyl.l", &req(take("weyl.l", true)))?;
        let spin_p = parse_usize_list("spin.p", &req(take("spin.p", true)))?;
        let spin_k = parse_usize_list("spin.k", &req(take("spin.k", true)))?;
        let spin_theta = take("spin.theta", false)
            .map(|v| parse_f64_list("spin.theta", &v))
            .transpose()?;
        let spin_z = take("spin.z", false).map(|v| parse_f64_list("spin.z", &v)).transpose()?;
        let spin_coherent_p = parse_usize_list("spin.coherent_p", &req(take("spin.coherent_p", true)))?;
        let spin_kmax = parse_scalar("spin.kmax", &req(take("spin.kmax", true)))?;
        let clifford_nu = parse_usize_list("clifford.nu", &req(take("clifford.nu", true)))?;
        let clifford_bracket_nu = take("clifford.bracket_nu", false)
            .map(|v| parse_usize_list("clifford.bracket_nu", &v))
            .transpose()?;
        let clifford_p = parse_usize_list("clifford.p", &req(take("clifford.p", true)))?;
        let clifford_dense_max = parse_scalar("clifford.dense_max", &req(take("clifford.dense_max", true)))?;
        let parafermi_p = parse_usize_list("parafermi.p", &req(take("parafermi.p", true)))?;
        let parafermi_nu = parse_usize_list("parafermi.nu", &req(take("parafermi.nu", true)))?;
        let parafermi_labels = parse_labels("parafermi.labels", &req(take("parafermi.labels", true)))?;
        let parafermi_span = parse_scalar("parafermi.span", &req(take("parafermi.span", true)))?;
        let site_cap = take("site_cap", false)
            .map(|v| parse_scalar("site_cap", &v))
            .transpose()?
            .unwrap_or(crate::parafermi::DEFAULT_SITE_CAP);
        let tol: f64 = take("tol", false)
            .map(|v| parse_scalar("tol", &v))
            .transpose()?
            .unwrap_or(1e-10);
        let samples = take("samples", false)
            .map(|v| parse_scalar("samples", &v))
            .transpose()?
            .unwrap_or(5);
        let seed = take("seed", false)
            .map(|v| parse_scalar("seed", &v))
            .transpose()?
            .unwrap_or(DEFAULT_SEED);
        let out = take("out", false);
        let format = take("format", false)
            .map(|v| v.parse())
            .transpose()?
            .unwrap_or(OutputFormat::Csv);

        if let Some(key) = map.keys().next() {
            return Err(usage(format!("unknown key {key}")));
        }
        let cfg = Self {
            experiment,
            weyl_nu,
            weyl_mu,
            weyl_l,
            spin_p,
            spin_k,
            spin_theta,
            spin_z,
            spin_coherent_p,
            spin_kmax,
            clifford_nu,
            clifford_bracket_nu,
            clifford_p,
            clifford_dense_max,
            parafermi_p,
            parafermi_nu,
            parafermi_labels,
            parafermi_span,
            site_cap,
            tol,
            samples,
            seed,
            out,
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: &[usize]| {
            if v.first() == Some(&0) {
                Err(usage(format!("{key}: values must be positive")))
            } else {
                Ok(())
            }
        };
        positive("weyl.nu", &self.weyl_nu)?;
        positive("spin.p", &self.spin_p)?;
        positive("clifford.nu", &self.clifford_nu)?;
        positive("parafermi.p", &self.parafermi_p)?;
        positive("parafermi.nu", &self.parafermi_nu)?;
        positive("spin.coherent_p", &self.spin_coherent_p)?;
        positive("clifford.p", &self.clifford_p)?;
        if let Some(nu) = &self.clifford_bracket_nu {
            positive("clifford.bracket_nu", nu)?;
        }
        if self.weyl_mu == MuRule::Fixed(0) {
            return Err(usage("weyl.mu must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(usage(format!("tol must be a nonnegative number, got {}", self.tol)));
        }
        if self.samples == 0 {
            return Err(usage("samples must be positive".into()));
        }
        Ok(())
    }
}
