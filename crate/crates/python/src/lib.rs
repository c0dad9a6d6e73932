//! Python bindings: configurations, classification, counting and the command reports.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cusp_cli::{render, CliError, Command};
use cusp_spectra::analysis::{threshold_estimate, weyl_constants};
use cusp_spectra::config::{parse_config, to_canonical_string};
use cusp_spectra::radial::{counting_samples, CountingOptions, GridPolicy};
use cusp_spectra::topology::{classify_potential, smith_normal_form, surface_gauge_options};
use cusp_spectra::transverse::{kernel_dimension, mode_spectrum, spectral_zeta};

create_exception!(cusp_spectra_py, CuspError, PyValueError);
create_exception!(cusp_spectra_py, NumericalError, PyRuntimeError);

fn err(e: impl Into<CliError>) -> PyErr {
    match e.into() {
        CliError::Numerical(m) => NumericalError::new_err(m),
        other => CuspError::new_err(other.to_string()),
    }
}

/// A parsed configuration.
#[pyclass(frozen, module = "cusp_spectra_py")]
struct Config {
    inner: cusp_spectra::config::Config,
}

#[pymethods]
impl Config {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_config(text).map_err(err)? })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| CuspError::new_err(format!("{}: {e}", path.display())))?;
        Self::new(&text)
    }

    /// Canonical text; parsing it gives back an equal configuration.
    fn canonical(&self) -> String {
        to_canonical_string(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.spec.n
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.spec.p_f64()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.spec.ends.iter().map(|e| e.label.clone()).collect()
    }

    /// `(label, verdict, reason)` per boundary component.
    fn classify(&self) -> Vec<(String, String, String)> {
        classify_potential(&self.inner.spec, &self.inner.potential)
            .components
            .into_iter()
            .map(|c| {
                let verdict = match c.verdict {
                    cusp_spectra::topology::Trapping::Trapping => "trapping",
                    cusp_spectra::topology::Trapping::NonTrapping => "non-trapping",
                };
                (c.label, verdict.to_string(), c.reason.as_str().to_string())
            })
            .collect()
    }

    fn is_trapping(&self) -> bool {
        classify_potential(&self.inner.spec, &self.inner.potential).trapping
    }

    fn kernel_dimension(&self) -> usize {
        kernel_dimension(&self.inner.spec, &self.inner.potential)
    }

    /// `(μ, multiplicity)` of the transverse modes of one end up to `mu_max`.
    fn modes(&self, label: &str, mu_max: f64) -> PyResult<Vec<(f64, usize)>> {
        let i = self.inner.spec.component(label).ok_or_else(|| CuspError::new_err(format!("no end labelled {label}")))?;
        let s = mode_spectrum(&self.inner.spec.ends[i], &self.inner.potential.ends[i].flux, mu_max).map_err(err)?;
        Ok(s.pairs())
    }

    /// `(value, error bound)` of the transverse zeta function of one end.
    #[pyo3(signature = (label, s, tol = 1e-10))]
    fn zeta(&self, label: &str, s: f64, tol: f64) -> PyResult<(f64, f64)> {
        let i = self.inner.spec.component(label).ok_or_else(|| CuspError::new_err(format!("no end labelled {label}")))?;
        let z = spectral_zeta(&self.inner.spec.ends[i], &self.inner.potential.ends[i].flux, s, tol).map_err(err)?;
        Ok((z.value, z.error_bound))
    }

    /// Eigenvalue counts `N(λ)` with the grid settings of the configuration.
    fn counting(&self, py: Python<'_>, lambdas: Vec<f64>) -> PyResult<Vec<usize>> {
        let nm = &self.inner.numerics;
        let opts = CountingOptions {
            policy: GridPolicy { h: nm.h, r_max: nm.r_max },
            continuum: nm.continuum,
            ..CountingOptions::default()
        };
        let spec = &self.inner.spec;
        let pot = &self.inner.potential;
        let res = py.detach(|| counting_samples(spec, pot, &lambdas, &opts)).map_err(err)?;
        Ok(res.counts)
    }

    /// Predicted leading constant of the counting function.
    fn weyl_constant(&self) -> PyResult<f64> {
        Ok(weyl_constants(&self.inner.spec, &self.inner.potential, self.inner.numerics.tol).map_err(err)?.constant)
    }

    /// `(κ, extrapolated κ or None)` from the truncation schedule.
    #[pyo3(signature = (h = 0.01))]
    fn threshold(&self, py: Python<'_>, h: f64) -> PyResult<(f64, Option<f64>)> {
        let (spec, pot, sched) = (&self.inner.spec, &self.inner.potential, &self.inner.numerics.schedule);
        let est = py.detach(|| threshold_estimate(spec, pot, sched, h)).map_err(err)?;
        Ok((est.kappa, est.kappa_hat))
    }

    /// Canonical JSON report of a command-line subcommand, e.g. `"weyl"`.
    fn report(&self, py: Python<'_>, command: &str) -> PyResult<String> {
        let cmd = Command::from_name(command).ok_or_else(|| CuspError::new_err(format!("unknown command {command}")))?;
        let cfg = &self.inner;
        Ok(py.detach(|| render(cmd, cfg)).map_err(err)?.json)
    }

    fn __repr__(&self) -> String {
        format!("Config(n={}, ends={:?})", self.inner.spec.n, self.labels())
    }
}

/// Invariant factors of an integer matrix.
#[pyfunction]
fn invariant_factors(matrix: Vec<Vec<i64>>) -> PyResult<Vec<i128>> {
    Ok(smith_normal_form(&matrix).map_err(err)?.invariant_factors())
}

/// `(trapping exists, non-trapping exists)` for a cusp surface; `b_class` is `(num, den)`.
#[pyfunction]
fn surface_gauges(cusps: usize, orientable: bool, b_class: (i64, i64)) -> PyResult<(bool, bool)> {
    if b_class.1 == 0 {
        return Err(CuspError::new_err("zero denominator"));
    }
    let g = surface_gauge_options(cusps, orientable, cusp_spectra::model::Rational::new(b_class.0, b_class.1)).map_err(err)?;
    Ok((g.trapping_exists, g.non_trapping_exists))
}

#[pymodule]
fn cusp_spectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Config>()?;
    m.add_function(wrap_pyfunction!(invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(surface_gauges, m)?)?;
    m.add("CuspError", m.py().get_type::<CuspError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add("COMMANDS", Command::ALL.iter().map(|c| c.name()).collect::<Vec<_>>())?;
    m.add("SCHEMA_VERSION", cusp_spectra::report::SCHEMA_VERSION)?;
    Ok(())
}
