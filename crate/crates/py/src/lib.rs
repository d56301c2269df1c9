//! Python bindings for `ccr-core`.
//!
//! States cross the boundary as lists of complex numbers. Errors map to
//! `ValueError`, except resource refusals (`MemoryError`) and failed
//! power iterations (`RuntimeError`).

use ccr_core::clifford::GammaFamily;
use ccr_core::parafermi::GreenSystem;
use ccr_core::spin::SpinRep;
use ccr_core::sweep::{self, DefectRecord, Experiment, SweepConfig, SweepStatus, DEFAULT_CONFIG};
use ccr_core::weyl::WeylPair;
use ccr_core::{CcrError, StateVector};
use num_complex::Complex64;
use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: CcrError) -> PyErr {
    match e {
        CcrError::ResourceCap { .. } => PyMemoryError::new_err(e.to_string()),
        CcrError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn state(v: Vec<Complex64>) -> PyResult<StateVector> {
    StateVector::from_vec(v).map_err(to_py)
}

fn states(vs: Vec<Vec<Complex64>>) -> PyResult<Vec<StateVector>> {
    vs.into_iter().map(state).collect()
}

fn out(v: StateVector) -> Vec<Complex64> {
    v.into_vec()
}

/// Clock-and-shift pair of order `nu`.
#[pyclass(name = "WeylPair", frozen)]
struct PyWeylPair(WeylPair);

#[pymethods]
impl PyWeylPair {
    #[new]
    fn new(nu: usize) -> PyResult<Self> {
        WeylPair::new(nu).map(Self).map_err(to_py)
    }

    #[getter]
    fn nu(&self) -> usize {
        self.0.nu()
    }

    fn fourier_basis_vector(&self, n: usize) -> PyResult<Vec<Complex64>> {
        self.0.fourier_basis_vector(n).map(out).map_err(to_py)
    }

    fn plateau_vector(&self, l: usize, mu: usize) -> PyResult<Vec<Complex64>> {
        self.0.plateau_vector(l, mu).map(out).map_err(to_py)
    }

    fn group_defect(&self, m: i64, n: i64, xi: Vec<Complex64>) -> PyResult<f64> {
        self.0.group_defect(m, n, &state(xi)?).map_err(to_py)
    }

    /// Returns `(quadrature, group)` defects.
    fn ccr_defect(&self, m: usize, n: usize, xi: Vec<Complex64>) -> PyResult<(f64, f64)> {
        let d = self.0.ccr_defect(m, n, &state(xi)?).map_err(to_py)?;
        Ok((d.quadrature, d.group))
    }

    fn commutator_factorization_defect(&self, m: i64, n: i64, xi: Vec<Complex64>) -> PyResult<f64> {
        self.0.commutator_factorization_defect(m, n, &state(xi)?).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("WeylPair(nu={})", self.0.nu())
    }
}

/// Spin `j = p/2` irreducible representation.
#[pyclass(name = "SpinRep", frozen)]
struct PySpinRep(SpinRep);

#[pymethods]
impl PySpinRep {
    #[new]
    fn new(p: usize) -> PyResult<Self> {
        SpinRep::new(p).map(Self).map_err(to_py)
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    #[getter]
    fn j(&self) -> f64 {
        self.0.j()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn weight_state(&self, k: usize) -> PyResult<Vec<Complex64>> {
        self.0.weight_state(k).map(out).map_err(to_py)
    }

    fn theorem31_defect(&self, k: usize) -> PyResult<f64> {
        self.0.theorem31_defect(k).map_err(to_py)
    }

    fn covariance_defect(&self, theta: f64) -> PyResult<f64> {
        self.0.covariance_defect(theta).map_err(to_py)
    }

    fn spin_coherent(&self, theta: f64, phi: f64) -> PyResult<Vec<Complex64>> {
        self.0.spin_coherent(theta, phi).map(out).map_err(to_py)
    }

    fn coherent_limit_error(&self, z: Complex64, kmax: usize) -> PyResult<Vec<f64>> {
        self.0.coherent_limit_error(z, kmax).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("SpinRep(p={})", self.0.p())
    }
}

/// Gamma matrices of the Clifford algebra on `2 nu + 1` generators.
#[pyclass(name = "GammaFamily", frozen)]
struct PyGammaFamily(GammaFamily);

#[pymethods]
impl PyGammaFamily {
    #[new]
    fn new(nu: usize) -> PyResult<Self> {
        GammaFamily::new(nu).map(Self).map_err(to_py)
    }

    #[getter]
    fn nu(&self) -> usize {
        self.0.nu()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Pauli string of gamma `i` (1-based), e.g. `(1+0i) Z1 Y2`.
    fn gamma_string(&self, i: usize) -> PyResult<String> {
        self.0.gamma_string(i).map(|s| s.to_string()).map_err(to_py)
    }

    fn apply_gamma(&self, i: usize, xi: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let g = self.0.gamma(i).map_err(to_py)?;
        g.apply(&state(xi)?).map(out).map_err(to_py)
    }

    fn anticommutation_defect(&self, vectors: Vec<Vec<Complex64>>) -> PyResult<f64> {
        self.0.anticommutation_defect(&states(vectors)?).map_err(to_py)
    }

    fn dense_anticommutation_defect(&self) -> PyResult<f64> {
        self.0.dense_anticommutation_defect().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("GammaFamily(nu={})", self.0.nu())
    }
}

/// Green-ansatz parafermi oscillators of order `p` on `nu` modes.
#[pyclass(name = "GreenSystem", frozen)]
struct PyGreenSystem(GreenSystem);

#[pymethods]
impl PyGreenSystem {
    #[new]
    fn new(p: usize, nu: usize) -> PyResult<Self> {
        GreenSystem::new(p, nu).map(Self).map_err(to_py)
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    #[getter]
    fn nu(&self) -> usize {
        self.0.nu()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn vacuum(&self) -> Vec<Complex64> {
        self.0.vacuum().as_slice().to_vec()
    }

    fn fock_state(&self, label: Vec<usize>) -> PyResult<Vec<Complex64>> {
        self.0.fock_state(&label).map(out).map_err(to_py)
    }

    fn apply_beta(&self, k: usize, xi: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let b = self.0.beta(k).map_err(to_py)?;
        b.apply(&state(xi)?).map(out).map_err(to_py)
    }

    fn apply_beta_dagger(&self, k: usize, xi: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let b = self.0.beta(k).map_err(to_py)?.adjoint();
        b.apply(&state(xi)?).map(out).map_err(to_py)
    }

    fn green_defect(&self, vectors: Vec<Vec<Complex64>>) -> PyResult<f64> {
        self.0.green_defect(&states(vectors)?).map_err(to_py)
    }

    fn trilinear_defect(&self) -> PyResult<f64> {
        self.0.trilinear_defect().map_err(to_py)
    }

    fn vacuum_condition_defect(&self) -> PyResult<f64> {
        self.0.vacuum_condition_defect().map_err(to_py)
    }

    /// Returns `(||[b_k, b_l] xi||, ||([b_k, b_l^dagger] - delta) xi||)`.
    fn ccr_defects(&self, k: usize, l: usize, xi: Vec<Complex64>) -> PyResult<(f64, f64)> {
        self.0.ccr_defects(k, l, &state(xi)?).map_err(to_py)
    }

    /// Returns `(kernel_dim, gap)` of the vacuum test on words up to `max_len`.
    fn vacuum_spectrum(&self, max_len: usize, tol: f64) -> PyResult<(usize, f64)> {
        let span = self.0.word_span(max_len).map_err(to_py)?;
        let s = self.0.vacuum_spectrum(&span, tol).map_err(to_py)?;
        Ok((s.kernel_dim, s.gap))
    }

    fn __repr__(&self) -> String {
        format!("GreenSystem(p={}, nu={})", self.0.p(), self.0.nu())
    }
}

/// Records and exit status of one sweep.
#[pyclass(name = "SweepResult", frozen)]
struct PySweepResult {
    records: Vec<DefectRecord>,
    status: SweepStatus,
}

#[pymethods]
impl PySweepResult {
    #[getter]
    fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// `(experiment, params, defect, measured, bound, outcome)` tuples.
    #[getter]
    fn records(&self) -> Vec<(String, String, String, Option<f64>, Option<f64>, String)> {
        self.records
            .iter()
            .map(|r| {
                (
                    r.experiment.clone(),
                    r.params.clone(),
                    r.defect.clone(),
                    r.measured,
                    r.bound,
                    r.outcome.to_string(),
                )
            })
            .collect()
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        sweep::write_csv(&self.records, &mut buf).map_err(to_py)?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn to_json(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        sweep::write_json(&self.records, &mut buf).map_err(to_py)?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    fn report(&self) -> String {
        sweep::report(&self.records)
    }

    fn __len__(&self) -> usize {
        self.records.len()
    }
}

/// Runs a sweep. `config` is `key = value` text; missing grids take defaults.
#[pyfunction]
#[pyo3(signature = (config=None, experiment=None, seed=None))]
fn run_sweep(py: Python<'_>, config: Option<&str>, experiment: Option<&str>, seed: Option<u64>) -> PyResult<PySweepResult> {
    let mut cfg = SweepConfig::parse(config.unwrap_or(DEFAULT_CONFIG)).map_err(to_py)?;
    if let Some(e) = experiment {
        cfg.experiment = e.parse::<Experiment>().map_err(to_py)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let (records, status) = py.detach(|| sweep::run_sweep(&cfg)).map_err(to_py)?;
    Ok(PySweepResult { records, status })
}

/// Summary report of CSV or JSON sweep output.
#[pyfunction]
fn report(text: &str) -> PyResult<String> {
    let records = sweep::read_records(text).map_err(to_py)?;
    Ok(sweep::report(&records))
}

#[pymodule]
fn ccr_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeylPair>()?;
    m.add_class::<PySpinRep>()?;
    m.add_class::<PyGammaFamily>()?;
    m.add_class::<PyGreenSystem>()?;
    m.add_class::<PySweepResult>()?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add("DEFAULT_CONFIG", DEFAULT_CONFIG)?;
    Ok(())
}
