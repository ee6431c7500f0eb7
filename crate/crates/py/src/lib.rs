use std::path::PathBuf;

use kmsflow_core::algebra::BlockShape;
use kmsflow_core::linalg::{CMatrix, C64};
use kmsflow_core::runner::{self, Format, RunError, RunOptions, Scenario, Tolerances};
use kmsflow_core::scaling::{self, Boundary};
use kmsflow_core::symmetry::{AutomorphicAction, Automorphism, FiniteGroup};
use kmsflow_core::{infogeo, states, thermal};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(kmsflow, KmsflowError, PyValueError);

type PyMatrix = Vec<Vec<C64>>;

fn err(e: kmsflow_core::Error) -> PyErr {
    KmsflowError::new_err(e.to_string())
}

fn run_err(e: RunError) -> PyErr {
    KmsflowError::new_err(format!("{e} (exit code {})", e.exit_code()))
}

fn shape(dims: Vec<usize>) -> PyResult<BlockShape> {
    BlockShape::new(dims).map_err(err)
}

fn to_matrix(rows: &PyMatrix) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(KmsflowError::new_err("matrices must be square nested lists"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> PyMatrix {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn to_blocks(blocks: &[PyMatrix]) -> PyResult<Vec<CMatrix>> {
    blocks.iter().map(to_matrix).collect()
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| KmsflowError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A state on a block algebra, given by one density block per summand.
#[pyclass(module = "kmsflow", frozen, from_py_object)]
#[derive(Clone)]
struct State {
    inner: states::StateFunctional,
}

#[pymethods]
impl State {
    #[new]
    #[pyo3(signature = (dims, densities, normalize = false))]
    fn new(dims: Vec<usize>, densities: Vec<PyMatrix>, normalize: bool) -> PyResult<Self> {
        let s = shape(dims)?;
        let blocks = to_blocks(&densities)?;
        let inner = if normalize {
            states::StateFunctional::from_unnormalized(s, blocks)
        } else {
            states::StateFunctional::new(s, blocks, 1e-9)
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn maximally_mixed(dims: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: states::StateFunctional::maximally_mixed(&shape(dims)?) })
    }

    #[staticmethod]
    fn mixture(parts: Vec<(f64, State)>) -> PyResult<Self> {
        let parts: Vec<_> = parts.into_iter().map(|(w, s)| (w, s.inner)).collect();
        Ok(Self { inner: states::mix_states(&parts).map_err(err)? })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.shape().dims().to_vec()
    }

    fn densities(&self) -> Vec<PyMatrix> {
        self.inner.densities().iter().map(from_matrix).collect()
    }

    fn block_weights(&self) -> Vec<f64> {
        self.inner.block_weights()
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn is_factor(&self, tol: f64) -> bool {
        self.inner.is_factor(tol)
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn is_faithful(&self, tol: f64) -> bool {
        self.inner.is_faithful(tol)
    }

    /// `ω(a)` for an element given by its blocks.
    fn expectation(&self, blocks: Vec<PyMatrix>) -> PyResult<C64> {
        let a = kmsflow_core::algebra::AlgebraElement::new(self.inner.shape().clone(), to_blocks(&blocks)?).map_err(err)?;
        states::evaluate(&self.inner, &a).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("State(dims={:?}, weights={:?})", self.inner.shape().dims(), self.inner.block_weights())
    }
}

/// Time evolution generated by a block-diagonal Hamiltonian.
#[pyclass(module = "kmsflow", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Dynamics {
    inner: thermal::Dynamics,
}

#[pymethods]
impl Dynamics {
    #[new]
    fn new(dims: Vec<usize>, hamiltonians: Vec<PyMatrix>) -> PyResult<Self> {
        let inner = thermal::Dynamics::new(shape(dims)?, to_blocks(&hamiltonians)?, 1e-9).map_err(err)?;
        Ok(Self { inner })
    }

    fn gibbs(&self, beta: f64) -> PyResult<State> {
        Ok(State { inner: thermal::gibbs_state(&self.inner, beta).map_err(err)? })
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn ground(&self, tol: f64) -> PyResult<State> {
        Ok(State { inner: thermal::ground_state(&self.inner, tol).map_err(err)? })
    }

    fn scaled(&self, lam: f64) -> Self {
        Self { inner: self.inner.scaled(lam) }
    }

    fn energies(&self) -> Vec<Vec<f64>> {
        self.inner.energies()
    }

    /// Largest KMS defect at `beta` over random Hermitian probe pairs.
    #[pyo3(signature = (state, beta, probes = 4, seed = 7))]
    fn kms_defect(&self, state: &State, beta: f64, probes: usize, seed: u64) -> PyResult<f64> {
        let probes = thermal::default_probes(self.inner.shape(), probes, seed);
        thermal::kms_defect(&state.inner, &self.inner, beta, &probes).map_err(err)
    }
}

/// Geometric scale grid `ratio**k` for `k = -K..=K`.
#[pyclass(module = "kmsflow", frozen, skip_from_py_object)]
#[derive(Clone)]
struct ScaleGrid {
    inner: scaling::ScaleGrid,
}

#[pymethods]
impl ScaleGrid {
    #[new]
    #[pyo3(signature = (ratio, k_max, boundary = "cyclic"))]
    fn new(ratio: f64, k_max: usize, boundary: &str) -> PyResult<Self> {
        let boundary = match boundary {
            "cyclic" => Boundary::Cyclic,
            "strict" => Boundary::Strict,
            other => return Err(KmsflowError::new_err(format!("unknown boundary '{other}'"))),
        };
        Ok(Self { inner: scaling::ScaleGrid::new(ratio, k_max, boundary).map_err(err)? })
    }

    fn points(&self) -> Vec<f64> {
        self.inner.points()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A finite group acting on a block algebra, completed from generators.
#[pyclass(module = "kmsflow", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Action {
    inner: AutomorphicAction,
}

#[pymethods]
impl Action {
    /// `group` is `"cyclic"`, `"dihedral"` or `"symmetric3"`; each generator
    /// is `(element, permutation, unitaries)` with `unitaries` optional.
    #[new]
    #[pyo3(signature = (dims, group, generators, order = 0))]
    fn new(
        dims: Vec<usize>,
        group: &str,
        generators: Vec<(usize, Vec<usize>, Option<Vec<PyMatrix>>)>,
        order: usize,
    ) -> PyResult<Self> {
        let s = shape(dims)?;
        let g = match group {
            "cyclic" => FiniteGroup::cyclic(order),
            "dihedral" => FiniteGroup::dihedral(order),
            "symmetric3" => Ok(FiniteGroup::symmetric3()),
            other => return Err(KmsflowError::new_err(format!("unknown group preset '{other}'"))),
        }
        .map_err(err)?;
        let gens = generators
            .into_iter()
            .map(|(e, perm, us)| {
                let a = match us {
                    Some(us) => Automorphism::new(s.clone(), perm, to_blocks(&us)?),
                    None => Automorphism::permutation(&s, perm),
                }
                .map_err(err)?;
                Ok((e, a))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = AutomorphicAction::from_generators(g, &s, &gens).map_err(err)?;
        let audit = kmsflow_core::symmetry::verify_action(&inner, 1e-9);
        if !audit.ok {
            return Err(KmsflowError::new_err(format!("not a group action (defect {:.3e})", audit.max_defect)));
        }
        Ok(Self { inner })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group().order()
    }

    /// Verdict, orbits, unbroken subgroup and augmented-centre data as a dict.
    fn breaking<'py>(&self, py: Python<'py>, state: &State) -> PyResult<Bound<'py, PyAny>> {
        let r = runner::ssb_analysis(&self.inner, &state.inner, "state", Tolerances::default()).map_err(run_err)?;
        json_to_py(py, &r)
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-10))]
fn is_disjoint(a: &State, b: &State, tol: f64) -> PyResult<bool> {
    states::is_disjoint(&a.inner, &b.inner, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-10))]
fn is_quasi_equivalent(a: &State, b: &State, tol: f64) -> PyResult<bool> {
    states::is_quasi_equivalent(&a.inner, &b.inner, tol).map_err(err)
}

/// Block whose central projection separates `a` from `b`, if any.
#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-10))]
fn central_witness(a: &State, b: &State, tol: f64) -> PyResult<Option<usize>> {
    Ok(states::central_witness(&a.inner, &b.inner, tol).map_err(err)?.map(|(k, _)| k))
}

/// `[(label, block, weight, state)]`, one entry per charged block.
#[pyfunction]
#[pyo3(signature = (state, tol = 1e-10))]
fn central_decomposition(state: &State, tol: f64) -> PyResult<Vec<(String, usize, f64, State)>> {
    let dec = states::central_decomposition(&state.inner, tol).map_err(err)?;
    Ok(dec.components.into_iter().map(|c| (c.label, c.block, c.weight, State { inner: c.state })).collect())
}

#[pyfunction]
#[pyo3(signature = (a, b, p, reference, tol = 1e-12))]
fn alpha_divergence(a: &State, b: &State, p: f64, reference: &State, tol: f64) -> PyResult<f64> {
    let params = infogeo::AlphaParams::from_p(p).map_err(err)?;
    infogeo::alpha_divergence(&a.inner, &b.inner, params, &reference.inner, tol).map_err(err)
}

/// Schatten `p`-norm of a block element; `p = float("inf")` gives the operator norm.
#[pyfunction]
fn lp_norm(dims: Vec<usize>, blocks: Vec<PyMatrix>, p: f64) -> PyResult<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(err(kmsflow_core::Error::BadExponent(p)));
    }
    let x = kmsflow_core::algebra::AlgebraElement::new(shape(dims)?, to_blocks(&blocks)?).map_err(err)?;
    Ok(infogeo::schatten_norm(&x, p))
}

#[pyfunction]
fn virtual_temperature(beta: f64, p: f64) -> PyResult<f64> {
    infogeo::virtual_temperature(beta, p).map_err(err)
}

/// Rows `{lambda, beta_in, beta_out, kms_defect}` over the grid.
#[pyfunction]
#[pyo3(signature = (dynamics, beta, grid, probes = 4, seed = 7))]
fn flow_table<'py>(
    py: Python<'py>,
    dynamics: &Dynamics,
    beta: f64,
    grid: &ScaleGrid,
    probes: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let probes = thermal::default_probes(dynamics.inner.shape(), probes, seed);
    let rows = scaling::flow_table(&dynamics.inner, beta, grid.inner, &probes).map_err(err)?;
    json_to_py(py, &rows)
}

/// `(beta, u, velocity)` of a timelike inverse-temperature four-vector.
#[pyfunction]
fn beta_decompose(components: [f64; 4]) -> PyResult<(f64, [f64; 4], [f64; 3])> {
    let v = thermal::InverseTemperature4Vector::new(components).map_err(err)?;
    let r = thermal::beta_decompose(&v).map_err(err)?;
    Ok((r.beta, r.u, r.velocity))
}

fn run_impl(scenario: Scenario, format: &str, tolerance: Option<f64>, jobs: usize) -> PyResult<(String, i32)> {
    let format: Format = format.parse().map_err(run_err)?;
    let report = runner::run(scenario, RunOptions { tolerance, jobs }).map_err(run_err)?;
    let bytes = runner::emit_report(&report, format).map_err(run_err)?;
    Ok((String::from_utf8(bytes).expect("reports are utf-8"), report.exit_code()))
}

/// Runs a scenario file; returns `(report, exit_code)`.
#[pyfunction]
#[pyo3(signature = (path, format = "json", tolerance = None, jobs = 1))]
fn run_scenario(path: PathBuf, format: &str, tolerance: Option<f64>, jobs: usize) -> PyResult<(String, i32)> {
    run_impl(runner::load_scenario(&path).map_err(run_err)?, format, tolerance, jobs)
}

/// Same as [`run_scenario`] for a JSON document held in memory.
#[pyfunction]
#[pyo3(signature = (text, format = "json", tolerance = None, jobs = 1))]
fn run_scenario_str(text: &str, format: &str, tolerance: Option<f64>, jobs: usize) -> PyResult<(String, i32)> {
    run_impl(Scenario::parse(text).map_err(run_err)?, format, tolerance, jobs)
}

#[pymodule]
fn kmsflow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("KmsflowError", m.py().get_type::<KmsflowError>())?;
    m.add_class::<State>()?;
    m.add_class::<Dynamics>()?;
    m.add_class::<ScaleGrid>()?;
    m.add_class::<Action>()?;
    m.add_function(wrap_pyfunction!(is_disjoint, m)?)?;
    m.add_function(wrap_pyfunction!(is_quasi_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(central_witness, m)?)?;
    m.add_function(wrap_pyfunction!(central_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(virtual_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(flow_table, m)?)?;
    m.add_function(wrap_pyfunction!(beta_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario_str, m)?)?;
    Ok(())
}
