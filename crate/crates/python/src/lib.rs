//! Python bindings: catalog processes, predictions, exact oracles and sweeps.

use std::collections::BTreeMap;

use levy_tails::asymptotics::{g_of, h_of, TheoremTag};
use levy_tails::cli::{self, Coupling, ExactQuantity, OracleChoice, SweepSpec, SweepVariable};
use levy_tails::error::Error;
use levy_tails::inversion::{forward_laplace_check, InversionConfig, LaplaceMethod, TailSource};
use levy_tails::processes::{self, Process as CoreProcess, Regime};
use levy_tails::quadrature::QuadratureConfig;
use levy_tails::specfun;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type RowTuple = (f64, f64, f64, f64, f64, f64);

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_quantity(text: &str) -> Result<ExactQuantity, Error> {
    match text {
        "tail" => Ok(ExactQuantity::Tail),
        "density" => Ok(ExactQuantity::Density),
        "levy_tail" | "levy-tail" => Ok(ExactQuantity::LevyTail),
        other => Err(Error::Config(format!("unknown quantity {other:?}; use tail, density or levy_tail"))),
    }
}

fn parse_oracle(text: &str) -> Result<OracleChoice, Error> {
    match text {
        "auto" => Ok(OracleChoice::Auto),
        "closed-form" | "closed_form" => Ok(OracleChoice::ClosedForm),
        "numerical" => Ok(OracleChoice::Numerical),
        other => Err(Error::Config(format!("unknown oracle {other:?}; use auto, closed-form or numerical"))),
    }
}

/// A catalog process with its parameters filled in.
#[pyclass(name = "Process", module = "levy_tails_py", frozen)]
pub struct Process {
    inner: CoreProcess,
    params: BTreeMap<String, f64>,
}

impl Process {
    pub fn build(name: &str, params: BTreeMap<String, f64>) -> Result<Self, Error> {
        let inner = processes::build_process(name, &params)?;
        let params = match &inner {
            CoreProcess::Subordinator(s) => s.params.clone(),
            CoreProcess::Isotropic(s) => s.params.clone(),
        };
        Ok(Process { inner, params })
    }

    /// phi for a subordinator, psi for an isotropic process.
    pub fn exponent_value(&self, x: f64) -> f64 {
        match &self.inner {
            CoreProcess::Subordinator(s) => s.phi(x),
            CoreProcess::Isotropic(s) => s.psi(x),
        }
    }

    /// H for a subordinator, g for an isotropic process.
    pub fn reduced_value(&self, x: f64) -> Result<f64, Error> {
        match &self.inner {
            CoreProcess::Subordinator(s) => h_of(s, x),
            CoreProcess::Isotropic(s) => g_of(s, x),
        }
    }

    pub fn predict_record(&self, theorem: &str, t: f64, r: f64, regime: &str) -> Result<(f64, f64, f64, bool), Error> {
        let theorem: TheoremTag = theorem.parse()?;
        let regime: Regime = regime.parse()?;
        let p = cli::predict(&self.inner, theorem, regime, t, r, &QuadratureConfig::default())?;
        Ok((p.value, p.leading_constant, p.epsilon, p.degenerate))
    }

    pub fn exact_value(&self, quantity: &str, t: f64, r: f64, oracle: &str) -> Result<(f64, &'static str), Error> {
        let v = cli::exact(&self.inner, parse_quantity(quantity)?, t, r, parse_oracle(oracle)?, &InversionConfig::default(), &QuadratureConfig::default())?;
        Ok((v.value, v.source))
    }

    pub fn converge_table(&self, theorem: &str, sweep: &str, couple: &str, regime: &str, oracle: &str) -> Result<cli::ConvergenceTable, Error> {
        let theorem: TheoremTag = theorem.parse()?;
        let regime: Regime = regime.parse()?;
        let variable = if theorem.is_radius() { SweepVariable::Radius } else { SweepVariable::R };
        let sweep = SweepSpec::parse(variable, sweep, Coupling::parse(couple)?)?;
        cli::converge(&self.inner, &self.params, theorem, regime, &sweep, parse_oracle(oracle)?, &InversionConfig::default(), &QuadratureConfig::default())
    }

    pub fn round_trip(&self, t: f64, lam: f64, method: &str) -> Result<f64, Error> {
        let CoreProcess::Subordinator(s) = &self.inner else {
            return Err(Error::Precondition(format!("{} is not a subordinator", self.inner.name())));
        };
        let inv = InversionConfig { method: method.parse::<LaplaceMethod>()?, ..Default::default() };
        forward_laplace_check(s, t, lam, &QuadratureConfig::default(), TailSource::Inversion(inv))
    }
}

#[pymethods]
impl Process {
    #[new]
    #[pyo3(signature = (name, params = None))]
    fn py_new(name: &str, params: Option<BTreeMap<String, f64>>) -> PyResult<Self> {
        Process::build(name, params.unwrap_or_default()).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            CoreProcess::Subordinator(_) => "subordinator",
            CoreProcess::Isotropic(_) => "isotropic",
        }
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, f64> {
        self.params.clone()
    }

    /// phi(x) for a subordinator, psi(x) for an isotropic process.
    fn exponent(&self, x: f64) -> f64 {
        self.exponent_value(x)
    }

    /// H(x) for a subordinator, g(x) for an isotropic process.
    fn reduced(&self, x: f64) -> PyResult<f64> {
        self.reduced_value(x).map_err(py_err)
    }

    #[pyo3(signature = (theorem, t, r, regime = "at-zero"))]
    fn predict<'py>(&self, py: Python<'py>, theorem: &str, t: f64, r: f64, regime: &str) -> PyResult<Bound<'py, PyDict>> {
        let (value, constant, epsilon, degenerate) = self.predict_record(theorem, t, r, regime).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("value", value)?;
        d.set_item("leading_constant", constant)?;
        d.set_item("epsilon", epsilon)?;
        d.set_item("degenerate", degenerate)?;
        Ok(d)
    }

    /// Exact tail, density or Levy tail; returns (value, source).
    #[pyo3(signature = (quantity, t, r, oracle = "auto"))]
    fn exact(&self, quantity: &str, t: f64, r: f64, oracle: &str) -> PyResult<(f64, &'static str)> {
        self.exact_value(quantity, t, r, oracle).map_err(py_err)
    }

    /// Convergence table as a list of (r, t, epsilon, exact, asymptotic, ratio).
    #[pyo3(signature = (theorem, sweep, couple, regime = "at-zero", oracle = "auto"))]
    fn converge(&self, theorem: &str, sweep: &str, couple: &str, regime: &str, oracle: &str) -> PyResult<Vec<RowTuple>> {
        let table = self.converge_table(theorem, sweep, couple, regime, oracle).map_err(py_err)?;
        Ok(table.rows.iter().map(|r| (r.r, r.t, r.epsilon, r.exact, r.asymptotic, r.ratio)).collect())
    }

    /// Same sweep rendered as CSV with its metadata line.
    #[pyo3(signature = (theorem, sweep, couple, regime = "at-zero", oracle = "auto"))]
    fn converge_csv(&self, theorem: &str, sweep: &str, couple: &str, regime: &str, oracle: &str) -> PyResult<String> {
        Ok(self.converge_table(theorem, sweep, couple, regime, oracle).map_err(py_err)?.to_csv())
    }

    /// Relative deviation of the Laplace round trip of the inverted tail.
    #[pyo3(signature = (t, lam, method = "auto"))]
    fn forward_laplace_check(&self, t: f64, lam: f64, method: &str) -> PyResult<f64> {
        self.round_trip(t, lam, method).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Process({:?}, {:?})", self.inner.name(), self.params)
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    processes::catalog_entries().iter().map(|e| e.name).collect()
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma(x).map_err(py_err)
}

#[pyfunction]
fn bessel_j(nu: f64, x: f64) -> PyResult<f64> {
    specfun::bessel_j(nu, x).map_err(py_err)
}

#[pymodule]
fn levy_tails_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Process>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    Ok(())
}
