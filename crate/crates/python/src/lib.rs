//! Python bindings for the `memflip` core crate.

use memflip::sweep::{Cell, FixedParams, SweepSpec, SweepTable};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: memflip::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Block length, loss, memory, bath occupation and flip setting.
#[pyclass(
    name = "ChannelParams",
    module = "memflip_py",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyChannelParams {
    inner: memflip::ChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    #[pyo3(signature = (n, eta, eps, T=3.0, flips=true))]
    #[allow(non_snake_case)]
    fn new(n: usize, eta: f64, eps: f64, T: f64, flips: bool) -> PyResult<Self> {
        let inner = memflip::ChannelParams::new(n, eta, eps, T, flips).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.inner.eps
    }

    #[getter(T)]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn flips(&self) -> bool {
        self.inner.flips
    }

    fn with_flips(&self, flips: bool) -> Self {
        Self {
            inner: self.inner.with_flips(flips),
        }
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ChannelParams(n={}, eta={}, eps={}, T={}, flips={})",
            p.n,
            p.eta,
            p.eps,
            p.t,
            if p.flips { "True" } else { "False" }
        )
    }
}

/// Signed weights of the first output quadrature on every input mode.
#[pyclass(name = "Coefficients", module = "memflip_py", frozen, get_all)]
struct PyCoefficients {
    zeta_in: f64,
    zeta_b: Vec<f64>,
    zeta_e: Vec<f64>,
    zeta_m: f64,
}

#[pymethods]
impl PyCoefficients {
    fn norm_sq(&self) -> f64 {
        self.zeta_in * self.zeta_in
            + self
                .zeta_b
                .iter()
                .chain(&self.zeta_e)
                .map(|z| z * z)
                .sum::<f64>()
            + self.zeta_m * self.zeta_m
    }

    fn __repr__(&self) -> String {
        format!(
            "Coefficients(zeta_in={}, zeta_b={:?}, zeta_e={:?}, zeta_m={})",
            self.zeta_in, self.zeta_b, self.zeta_e, self.zeta_m
        )
    }
}

impl From<memflip::CoefficientSet> for PyCoefficients {
    fn from(c: memflip::CoefficientSet) -> Self {
        Self {
            zeta_in: c.zeta_in,
            zeta_b: c.zeta_b,
            zeta_e: c.zeta_e,
            zeta_m: c.zeta_m,
        }
    }
}

/// Single-mode Gaussian channel `(d, X, Y)` with 2x2 matrices as nested lists.
#[pyclass(name = "ChannelTriad", module = "memflip_py", frozen)]
struct PyChannelTriad {
    inner: memflip::ChannelTriad,
}

fn rows(m: &impl std::ops::Index<(usize, usize), Output = f64>) -> Vec<Vec<f64>> {
    (0..2)
        .map(|r| (0..2).map(|c| m[(r, c)]).collect())
        .collect()
}

#[pymethods]
impl PyChannelTriad {
    #[getter]
    fn d(&self) -> Vec<f64> {
        self.inner.d().iter().copied().collect()
    }

    #[getter]
    fn x(&self) -> Vec<Vec<f64>> {
        rows(self.inner.x())
    }

    #[getter]
    fn y(&self) -> Vec<Vec<f64>> {
        rows(self.inner.y())
    }

    /// `ζ` when `X = ζ I`, otherwise `None`.
    fn scalar_transfer(&self) -> Option<f64> {
        self.inner.scalar_transfer()
    }

    /// Least eigenvalue of `Y + i(J − X J Xᵀ)/2`; nonnegative for a valid channel.
    fn cp_witness(&self) -> f64 {
        self.inner.cp_witness()
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelTriad(d={:?}, x={:?}, y={:?})",
            self.d(),
            self.x(),
            self.y()
        )
    }
}

/// Entanglement left in a two-mode squeezed pair after one half crosses the channel.
#[pyclass(name = "Entanglement", module = "memflip_py", frozen, get_all)]
struct PyEntanglement {
    d_minus: f64,
    separable: bool,
}

#[pymethods]
impl PyEntanglement {
    fn __repr__(&self) -> String {
        let sep = if self.separable { "True" } else { "False" };
        format!("Entanglement(d_minus={}, separable={sep})", self.d_minus)
    }
}

#[pyfunction]
fn reduce(params: &PyChannelParams) -> PyResult<PyCoefficients> {
    memflip::reduce(&params.inner)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn closed_form_coefficients(params: &PyChannelParams) -> PyResult<PyCoefficients> {
    memflip::closed_form_coefficients(&params.inner)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn effective_triad(params: &PyChannelParams) -> PyResult<PyChannelTriad> {
    let inner = memflip::effective_triad(&params.inner).map_err(py_err)?;
    Ok(PyChannelTriad { inner })
}

#[pyfunction]
#[pyo3(signature = (eta, eps, T=3.0))]
#[allow(non_snake_case)]
fn single_use_triad(eta: f64, eps: f64, T: f64) -> PyResult<PyChannelTriad> {
    let inner = memflip::single_use_triad(eta, eps, T).map_err(py_err)?;
    Ok(PyChannelTriad { inner })
}

/// Input/output overlap for the coherent state `|sqrt(alpha2)>`.
#[pyfunction]
#[pyo3(signature = (params, alpha2=8.0))]
fn coherent_fidelity(params: &PyChannelParams, alpha2: f64) -> PyResult<f64> {
    memflip::coherent_fidelity(&params.inner, alpha2)
        .map(|f| f.value)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (params, mu=0.6))]
fn entanglement_survival(params: &PyChannelParams, mu: f64) -> PyResult<PyEntanglement> {
    let r = memflip::entanglement_survival(&params.inner, mu).map_err(py_err)?;
    Ok(PyEntanglement {
        d_minus: r.d_minus,
        separable: r.separable,
    })
}

fn table_rows(table: SweepTable) -> Vec<Vec<f64>> {
    table
        .rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| match c {
                    Cell::Num(x) => x,
                    Cell::Bool(b) => f64::from(u8::from(b)),
                })
                .collect()
        })
        .collect()
}

fn grid_spec(
    n: usize,
    flips: bool,
    t: f64,
    alpha2: f64,
    mu: f64,
    grid: (usize, usize),
) -> PyResult<SweepSpec> {
    let fixed = FixedParams {
        n,
        t,
        alpha2,
        mu,
        flips,
        ..FixedParams::default()
    };
    SweepSpec::eta_eps(grid.0, grid.1, fixed).map_err(py_err)
}

/// `[eta, eps, F]` rows over the unit (eta, eps) square.
#[pyfunction]
#[pyo3(signature = (n=2, flips=true, T=3.0, alpha2=8.0, grid=(51, 51)))]
#[allow(non_snake_case)]
fn fidelity_grid(
    n: usize,
    flips: bool,
    T: f64,
    alpha2: f64,
    grid: (usize, usize),
) -> PyResult<Vec<Vec<f64>>> {
    let spec = grid_spec(n, flips, T, alpha2, 0.6, grid)?;
    memflip::sweep::fidelity_sweep(&spec)
        .map(table_rows)
        .map_err(py_err)
}

/// `[eta, eps, d_minus, separable]` rows, with `separable` as 0.0 or 1.0.
#[pyfunction]
#[pyo3(signature = (n=2, flips=true, T=1.0, mu=0.6, grid=(51, 51)))]
#[allow(non_snake_case)]
fn entanglement_grid(
    n: usize,
    flips: bool,
    T: f64,
    mu: f64,
    grid: (usize, usize),
) -> PyResult<Vec<Vec<f64>>> {
    let spec = grid_spec(n, flips, T, 8.0, mu, grid)?;
    memflip::sweep::entanglement_sweep(&spec)
        .map(table_rows)
        .map_err(py_err)
}

/// Runs the self-checks and returns `(all_passed, report)`.
#[pyfunction]
#[pyo3(signature = (seed=None))]
fn verify(py: Python<'_>, seed: Option<u64>) -> (bool, String) {
    let seed = seed.unwrap_or(memflip::verify::DEFAULT_SEED);
    let report = py.detach(|| memflip::verify::run_checks(&memflip::Pipeline::default(), seed));
    (report.all_passed(), report.render())
}

#[pymodule]
fn memflip_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelParams>()?;
    m.add_class::<PyCoefficients>()?;
    m.add_class::<PyChannelTriad>()?;
    m.add_class::<PyEntanglement>()?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(effective_triad, m)?)?;
    m.add_function(wrap_pyfunction!(single_use_triad, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_survival, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_grid, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_grid, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
