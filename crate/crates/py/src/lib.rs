//! Python module `lu_invar`.
//!
//! Matrices cross the boundary as nested lists of Python `complex`, and
//! library errors are raised as `lu_invar.LuInvarError` (a `ValueError`)
//! whose message starts with the error kind, e.g. `"NotPSD: ..."`.

use std::collections::BTreeMap;

use lu_invar_core::equivalence::{self, CheckValue, ScreenConfig, Verdict};
use lu_invar_core::invariants::{self as inv, LambdaInvariant};
use lu_invar_core::linalg::{self, seeded_rng, STRUCTURE_TOL};
use lu_invar_core::states::{self, RankTol};
use lu_invar_core::{reference_states, ComplexMatrix};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    lu_invar,
    LuInvarError,
    PyValueError,
    "Raised for invalid inputs and numerical failures."
);

fn to_py(e: lu_invar_core::Error) -> PyErr {
    LuInvarError::new_err(e.to_string())
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(LuInvarError::new_err(
            "BadShape: rows have different lengths",
        ));
    }
    ComplexMatrix::from_vec(n, m, rows.concat()).map_err(to_py)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn rank_tol(relative: Option<f64>, absolute: Option<f64>) -> RankTol {
    match (absolute, relative) {
        (Some(a), _) => RankTol::Absolute(a),
        (None, Some(r)) => RankTol::Relative(r),
        (None, None) => RankTol::default(),
    }
}

/// A validated density matrix over subsystems of dimensions `dims`.
#[pyclass(module = "lu_invar", frozen)]
pub struct DensityMatrix {
    inner: states::DensityMatrix,
}

#[pymethods]
impl DensityMatrix {
    #[new]
    #[pyo3(signature = (matrix, dims, tol = STRUCTURE_TOL))]
    fn new(matrix: Vec<Vec<Complex64>>, dims: Vec<usize>, tol: f64) -> PyResult<Self> {
        let mat = matrix_from_rows(&matrix)?;
        Ok(Self {
            inner: states::validate_density(mat, &dims, tol).map_err(to_py)?,
        })
    }

    /// Random state of the given rank, reproducible from `seed`.
    #[staticmethod]
    fn random(dims: Vec<usize>, rank: usize, seed: u64) -> PyResult<Self> {
        let inner = states::random_density(&dims, rank, &mut seeded_rng(seed)).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// One of the reference states `"rho1"`, `"rho2"`, `"sigma1"`, `"sigma2"`.
    #[staticmethod]
    fn reference(name: &str) -> PyResult<Self> {
        let inner = match name {
            "rho1" => reference_states::rho1(),
            "rho2" => reference_states::rho2(),
            "sigma1" => reference_states::sigma1(),
            "sigma2" => reference_states::sigma2(),
            other => {
                return Err(LuInvarError::new_err(format!(
                    "unknown reference state {other:?}"
                )))
            }
        };
        Ok(Self { inner })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    /// Eigenvalues in descending order.
    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        Ok(self.inner.eigen().map_err(to_py)?.values)
    }

    /// `(u₁ ⊗ … ⊗ u_m) ρ (u₁ ⊗ … ⊗ u_m)†`.
    fn apply_local_unitaries(&self, locals: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let mats = locals
            .iter()
            .map(|u| matrix_from_rows(u))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = states::apply_local_unitary_density(&self.inner, &mats).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?})", self.inner.dims())
    }
}

/// An ensemble `{A_i}` with `ρ = Σ vec(A_i) vec(A_i)†`.
#[pyclass(module = "lu_invar", frozen)]
pub struct PureStateDecomposition {
    inner: states::PureStateDecomposition,
}

#[pymethods]
impl PureStateDecomposition {
    #[new]
    fn new(mats: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let mats = mats
            .iter()
            .map(|m| matrix_from_rows(m))
            .collect::<PyResult<Vec<_>>>()?;
        let (rows, cols) = mats.first().map_or((0, 0), ComplexMatrix::shape);
        let inner = states::PureStateDecomposition::new(rows, cols, mats).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn mats(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.mats().iter().map(matrix_to_rows).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `B_i = Σ_j U_ij A_j` for a unitary `U`.
    fn mix(&self, unitary: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let u = matrix_from_rows(&unitary)?;
        let inner = states::mix_decomposition(&self.inner, &u).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Appends zero matrices up to `j` members.
    fn pad(&self, j: usize) -> PyResult<Self> {
        let inner = states::pad_with_zeros(&self.inner, j).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn reconstruct(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.reconstruct())
    }

    /// `Ω_ij = tr(A_i A_j†)`.
    fn gram_matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(inv::gram_matrix(&self.inner).matrix())
    }

    /// Characteristic-polynomial invariants `F_0 … F_I`.
    fn f_invariants(&self) -> Vec<Complex64> {
        inv::f_invariants(&inv::gram_matrix(&self.inner))
            .values()
            .to_vec()
    }

    fn invariant_n(&self) -> PyResult<Complex64> {
        let h = inv::hypermatrix(&self.inner, 2).map_err(to_py)?;
        inv::invariant_n(&h).map_err(to_py)
    }

    fn invariant_m(&self) -> PyResult<Complex64> {
        let h = inv::hypermatrix(&self.inner, 2).map_err(to_py)?;
        inv::invariant_m(&h).map_err(to_py)
    }

    /// Coefficients (ascending) of `inv(λE − Ω_s)` for `inv` in
    /// `"det"`, `"invariant_N"`, `"invariant_M"`.
    fn lambda_poly(&self, invariant: &str, s: usize) -> PyResult<Vec<Complex64>> {
        let which = match invariant {
            "det" => LambdaInvariant::Det,
            "invariant_N" | "N" => LambdaInvariant::N,
            "invariant_M" | "M" => LambdaInvariant::M,
            other => {
                return Err(LuInvarError::new_err(format!(
                    "unknown invariant {other:?}"
                )))
            }
        };
        Ok(inv::lambda_poly(&self.inner, s, which)
            .map_err(to_py)?
            .coeffs)
    }

    fn __repr__(&self) -> String {
        format!(
            "PureStateDecomposition(len={}, shape=({}, {}))",
            self.inner.len(),
            self.inner.rows(),
            self.inner.cols()
        )
    }
}

/// Eigenvector decomposition `A_i = √λ_i · reshape(v_i)` across the cut.
#[pyfunction]
#[pyo3(signature = (rho, cut = 1, rank_tol = None, abs_rank_tol = None))]
fn eigen_decomposition(
    rho: &DensityMatrix,
    cut: usize,
    rank_tol: Option<f64>,
    abs_rank_tol: Option<f64>,
) -> PyResult<PureStateDecomposition> {
    let inner = states::eigen_decomposition_with_cut(
        &rho.inner,
        cut,
        self::rank_tol(rank_tol, abs_rank_tol),
    )
    .map_err(to_py)?;
    Ok(PureStateDecomposition { inner })
}

#[pyfunction]
#[pyo3(signature = (rho, cut = 1))]
fn realignment_kyfan(rho: &DensityMatrix, cut: usize) -> PyResult<f64> {
    inv::realignment_kyfan_with_cut(&rho.inner, cut).map_err(to_py)
}

/// Cayley's hyperdeterminant of a 2×2×2 tensor given as 8 entries `a[4i+2j+k]`.
#[pyfunction]
fn cayley_det_222(a: Vec<Complex64>) -> PyResult<Complex64> {
    inv::cayley_det_222(&a).map_err(to_py)
}

#[pyfunction]
fn haar_unitary(dim: usize, seed: u64) -> Vec<Vec<Complex64>> {
    matrix_to_rows(&linalg::haar_unitary(dim, seed))
}

/// Invariant fingerprint of a state.
#[pyclass(module = "lu_invar", frozen, get_all)]
pub struct Fingerprint {
    dims: Vec<usize>,
    cut: usize,
    rank: usize,
    #[pyo3(name = "F")]
    f: Vec<Complex64>,
    #[pyo3(name = "N")]
    n: Option<Complex64>,
    #[pyo3(name = "M")]
    m: Option<Complex64>,
    kyfan: f64,
    /// `"lambda_<invariant>"` → coefficients, ascending.
    lambda_coeffs: BTreeMap<String, Vec<Complex64>>,
}

#[pymethods]
impl Fingerprint {
    fn __repr__(&self) -> String {
        format!(
            "Fingerprint(dims={:?}, rank={}, kyfan={})",
            self.dims, self.rank, self.kyfan
        )
    }
}

impl From<equivalence::Fingerprint> for Fingerprint {
    fn from(fp: equivalence::Fingerprint) -> Self {
        Self {
            dims: fp.dims,
            cut: fp.cut,
            rank: fp.rank,
            f: fp.f.values().to_vec(),
            n: fp.n_value,
            m: fp.m_value,
            kyfan: fp.kyfan,
            lambda_coeffs: fp
                .lambda
                .into_iter()
                .map(|p| (format!("lambda_{}", p.invariant.name()), p.coeffs))
                .collect(),
        }
    }
}

/// One compared invariant.
#[pyclass(module = "lu_invar", frozen, get_all)]
pub struct Check {
    name: String,
    /// Complex value, or the dimension list for a dimension mismatch.
    a: Py<PyAny>,
    b: Py<PyAny>,
    delta: f64,
    passed: bool,
    marginal: bool,
}

#[pymethods]
impl Check {
    fn __repr__(&self) -> String {
        let status = if self.passed { "pass" } else { "FAIL" };
        format!("Check({}, {status}, delta={:e})", self.name, self.delta)
    }
}

/// Result of `screen`: `"NotEquivalent"` with a witness, or `"Inconclusive"`.
#[pyclass(module = "lu_invar", frozen, get_all)]
pub struct Report {
    verdict: String,
    witness: Option<String>,
    checks: Vec<Py<Check>>,
    /// `(name, |Δ|)` ordered by normalized difference, largest first.
    hints: Vec<(String, f64)>,
}

#[pymethods]
impl Report {
    fn __repr__(&self) -> String {
        match &self.witness {
            Some(w) => format!("Report({}, witness='{w}')", self.verdict),
            None => format!("Report({}, witness=None)", self.verdict),
        }
    }
}

fn check_value(py: Python<'_>, v: &CheckValue) -> PyResult<Py<PyAny>> {
    Ok(match v {
        CheckValue::Number(z) => z.into_pyobject(py)?.into_any().unbind(),
        CheckValue::Dims(d) => d.into_pyobject(py)?.into_any().unbind(),
    })
}

fn config(
    atol: f64,
    rtol: f64,
    cut: usize,
    rank_tol: Option<f64>,
    abs_rank_tol: Option<f64>,
) -> ScreenConfig {
    ScreenConfig {
        rank_tol: self::rank_tol(rank_tol, abs_rank_tol),
        atol,
        rtol,
        cut,
        seed: 0,
    }
}

#[pyfunction]
#[pyo3(signature = (rho, cut = 1, rank_tol = None, abs_rank_tol = None))]
fn fingerprint(
    rho: &DensityMatrix,
    cut: usize,
    rank_tol: Option<f64>,
    abs_rank_tol: Option<f64>,
) -> PyResult<Fingerprint> {
    let cfg = config(1e-8, 1e-8, cut, rank_tol, abs_rank_tol);
    Ok(equivalence::fingerprint(&rho.inner, &cfg)
        .map_err(to_py)?
        .into())
}

/// One-sided LU screening; never concludes equivalence.
#[pyfunction]
#[pyo3(signature = (a, b, atol = 1e-8, rtol = 1e-8, cut = 1, rank_tol = None, abs_rank_tol = None))]
#[allow(clippy::too_many_arguments)]
fn screen(
    py: Python<'_>,
    a: &DensityMatrix,
    b: &DensityMatrix,
    atol: f64,
    rtol: f64,
    cut: usize,
    rank_tol: Option<f64>,
    abs_rank_tol: Option<f64>,
) -> PyResult<Report> {
    let cfg = config(atol, rtol, cut, rank_tol, abs_rank_tol);
    let report = py
        .detach(|| equivalence::screen(&a.inner, &b.inner, &cfg))
        .map_err(to_py)?;
    let checks = report
        .checks
        .iter()
        .map(|c| {
            Py::new(
                py,
                Check {
                    name: c.name.clone(),
                    a: check_value(py, &c.a)?,
                    b: check_value(py, &c.b)?,
                    delta: c.delta,
                    passed: c.pass,
                    marginal: c.marginal,
                },
            )
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Report {
        verdict: match report.verdict {
            Verdict::NotEquivalent => "NotEquivalent",
            Verdict::Inconclusive => "Inconclusive",
        }
        .to_string(),
        witness: report.witness.as_ref().map(|w| w.name.clone()),
        checks,
        hints: equivalence::witness_hints(&report)
            .into_iter()
            .map(|h| (h.name, h.delta))
            .collect(),
    })
}

#[pymodule]
pub fn lu_invar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LuInvarError", m.py().get_type::<LuInvarError>())?;
    m.add_class::<DensityMatrix>()?;
    m.add_class::<PureStateDecomposition>()?;
    m.add_class::<Fingerprint>()?;
    m.add_class::<Check>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(eigen_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(realignment_kyfan, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_det_222, m)?)?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(screen, m)?)?;
    Ok(())
}
