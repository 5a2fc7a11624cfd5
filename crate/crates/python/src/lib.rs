//! Python module `cesaro`: spaces, kernels, Lebesgue estimates and
//! expansions from `cesaro-core`.

use std::cell::RefCell;

use cesaro_core::analysis;
use cesaro_core::cylinder::{self, CylinderSpace, ExpansionCoeffs};
use cesaro_core::orthopoly::{self, CesaroPlan, JacobiParams};
use cesaro_core::quadrature;
use cesaro_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::EigenSolve(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn params(alpha: f64, beta: f64) -> PyResult<JacobiParams> {
    JacobiParams::new(alpha, beta).map_err(to_py)
}

#[pyclass(name = "CylinderSpace", module = "cesaro", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCylinderSpace {
    inner: CylinderSpace,
}

#[pymethods]
impl PyCylinderSpace {
    #[new]
    fn new(d: usize, m: usize, mu: f64, alpha: Vec<f64>, beta: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: CylinderSpace::new(d, m, mu, alpha, beta).map_err(to_py)? })
    }

    /// `d = m = 1`, `mu = 0`, `alpha = beta = -1/2`.
    #[staticmethod]
    fn chebyshev() -> Self {
        Self { inner: CylinderSpace::chebyshev() }
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu()
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha().to_vec()
    }

    #[getter]
    fn beta(&self) -> Vec<f64> {
        self.inner.beta().to_vec()
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn weight(&self, x: Vec<f64>, y: Vec<f64>) -> f64 {
        self.inner.weight(&x, &y)
    }

    fn __repr__(&self) -> String {
        format!(
            "CylinderSpace(d={}, m={}, mu={}, alpha={:?}, beta={:?})",
            self.inner.d(),
            self.inner.m(),
            self.inner.mu(),
            self.inner.alpha(),
            self.inner.beta()
        )
    }
}

#[pyclass(name = "CriticalIndexReport", module = "cesaro", frozen, get_all)]
pub struct PyCriticalIndexReport {
    first_term: f64,
    second_term: f64,
    bound: f64,
    warnings: Vec<String>,
}

#[pyclass(name = "LebesgueEstimate", module = "cesaro", frozen, get_all)]
pub struct PyLebesgueEstimate {
    n: usize,
    delta: f64,
    x_prime: Vec<f64>,
    y_prime: Vec<f64>,
    grid_points: usize,
    value: f64,
    refinement: f64,
    rule_degree: usize,
    reliable: bool,
}

impl From<analysis::LebesgueEstimate> for PyLebesgueEstimate {
    fn from(e: analysis::LebesgueEstimate) -> Self {
        Self {
            reliable: e.reliable(),
            n: e.n,
            delta: e.delta,
            x_prime: e.x_prime,
            y_prime: e.y_prime,
            grid_points: e.grid_points,
            value: e.value,
            refinement: e.refinement,
            rule_degree: e.rule_degree,
        }
    }
}

/// Fourier coefficients of a function; evaluates partial sums and Cesàro means.
#[pyclass(name = "Expansion", module = "cesaro", frozen)]
pub struct PyExpansion {
    inner: ExpansionCoeffs,
}

#[pymethods]
impl PyExpansion {
    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    /// Coefficients in basis order.
    fn coefficients(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn partial_sum(&self, n: usize, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        cylinder::partial_sum_eval(&self.inner, n, &x, &y).map_err(to_py)
    }

    fn cesaro_sum(&self, n: usize, delta: f64, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        let plan = CesaroPlan::new(n, delta).map_err(to_py)?;
        cylinder::cesaro_sum_eval(&self.inner, &plan, &x, &y).map_err(to_py)
    }
}

#[pyfunction]
fn pochhammer(a: f64, j: usize) -> f64 {
    orthopoly::pochhammer(a, j)
}

#[pyfunction]
fn cesaro_coeff(n: usize, j: usize, delta: f64) -> PyResult<f64> {
    orthopoly::cesaro_coeff(n, j, delta).map_err(to_py)
}

#[pyfunction]
fn eval_jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> PyResult<f64> {
    Ok(orthopoly::eval_jacobi(n, &params(alpha, beta)?, x))
}

#[pyfunction]
fn jacobi_norm_const(n: usize, alpha: f64, beta: f64) -> PyResult<f64> {
    Ok(orthopoly::jacobi_norm_const(n, &params(alpha, beta)?))
}

/// `(nodes, weights)` of the `n`-point Gauss–Jacobi rule.
#[pyfunction]
fn gauss_jacobi_rule(n: usize, alpha: f64, beta: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = quadrature::gauss_jacobi_rule(n, &params(alpha, beta)?).map_err(to_py)?;
    Ok((rule.abscissae(), rule.weight_slice().to_vec()))
}

#[pyfunction]
fn kernel(space: &PyCylinderSpace, n: usize, x: Vec<f64>, xp: Vec<f64>, y: Vec<f64>, yp: Vec<f64>) -> PyResult<f64> {
    cylinder::kernel(&space.inner, n, &x, &xp, &y, &yp).map_err(to_py)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn cesaro_kernel(
    space: &PyCylinderSpace,
    n: usize,
    delta: f64,
    x: Vec<f64>,
    xp: Vec<f64>,
    y: Vec<f64>,
    yp: Vec<f64>,
) -> PyResult<f64> {
    let plan = CesaroPlan::new(n, delta).map_err(to_py)?;
    cylinder::cesaro_kernel(&space.inner, &plan, &x, &xp, &y, &yp).map_err(to_py)
}

#[pyfunction]
fn critical_delta(space: &PyCylinderSpace) -> PyCriticalIndexReport {
    let r = analysis::critical_delta(&space.inner);
    PyCriticalIndexReport { first_term: r.first_term, second_term: r.second_term, bound: r.bound, warnings: r.warnings }
}

#[pyfunction]
#[pyo3(signature = (space, n, delta, xp, yp, refinement_level = 0))]
fn lebesgue_quantity(
    py: Python<'_>,
    space: &PyCylinderSpace,
    n: usize,
    delta: f64,
    xp: Vec<f64>,
    yp: Vec<f64>,
    refinement_level: u32,
) -> PyResult<PyLebesgueEstimate> {
    let sp = space.inner.clone();
    py.detach(move || analysis::lebesgue_quantity(&sp, n, delta, &xp, &yp, refinement_level))
        .map(Into::into)
        .map_err(to_py)
}

/// Max over the default `y'` grid (or `grid`) with `x'` at the corner.
#[pyfunction]
#[pyo3(signature = (space, n, delta, grid = None, refinement_level = 0))]
fn lebesgue_sup(
    py: Python<'_>,
    space: &PyCylinderSpace,
    n: usize,
    delta: f64,
    grid: Option<Vec<Vec<f64>>>,
    refinement_level: u32,
) -> PyResult<PyLebesgueEstimate> {
    let sp = space.inner.clone();
    let grid = match grid {
        Some(g) => g,
        None => analysis::default_ball_grid(sp.d()).map_err(to_py)?,
    };
    py.detach(move || analysis::lebesgue_sup(&sp, n, delta, &grid, refinement_level))
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn dlambda(lam: f64, v: f64, p: f64, u: f64) -> f64 {
    analysis::dlambda(lam, v, p, u)
}

/// `(quadrature estimate, closed form)` of the `D_lambda` integral.
#[pyfunction]
#[pyo3(signature = (lam, v, u, node_count = 200))]
fn dlambda_identity_check(lam: f64, v: f64, u: f64, node_count: usize) -> PyResult<(f64, f64)> {
    analysis::dlambda_identity_check(lam, v, u, node_count).map_err(to_py)
}

/// Expands the Python callable `f(x, y)` (lists in, float out) to degree
/// `n`; the rule degree defaults to `2n + 16`.
#[pyfunction]
#[pyo3(signature = (space, n, f, rule_degree = None))]
fn expand(space: &PyCylinderSpace, n: usize, f: Bound<'_, PyAny>, rule_degree: Option<usize>) -> PyResult<PyExpansion> {
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let call = |x: &[f64], y: &[f64]| -> f64 {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        match f.call1((x.to_vec(), y.to_vec())).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let result = cylinder::expand(&space.inner, n, call, rule_degree.unwrap_or(2 * n + 16));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(PyExpansion { inner: result.map_err(to_py)? })
}

#[pymodule]
fn cesaro(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyCylinderSpace>()?;
    m.add_class::<PyCriticalIndexReport>()?;
    m.add_class::<PyLebesgueEstimate>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(eval_jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_norm_const, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_jacobi_rule, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(critical_delta, m)?)?;
    m.add_function(wrap_pyfunction!(lebesgue_quantity, m)?)?;
    m.add_function(wrap_pyfunction!(lebesgue_sup, m)?)?;
    m.add_function(wrap_pyfunction!(dlambda, m)?)?;
    m.add_function(wrap_pyfunction!(dlambda_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    Ok(())
}
