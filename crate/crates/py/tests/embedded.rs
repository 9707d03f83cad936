//! Drives the module through an embedded interpreter, the same way Python
//! code would use the built extension.

use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(lu_invar::lu_invar)(py);
        let globals = PyDict::new(py);
        globals.set_item("lu_invar", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed: {e}");
        }
    });
}

#[test]
fn reference_pair_is_separated_by_n() {
    with_module(c_str!(
        r#"
rho1 = lu_invar.DensityMatrix.reference("rho1")
rho2 = lu_invar.DensityMatrix.reference("rho2")
fp = lu_invar.fingerprint(rho1)
assert fp.rank == 2
assert abs(fp.N - 1 / 256) < 1e-12, fp.N
assert abs(lu_invar.fingerprint(rho2).N) < 1e-12
report = lu_invar.screen(rho1, rho2)
assert report.verdict == "NotEquivalent"
assert report.witness == "invariant_N"
assert report.hints[0][0] == "invariant_N"
assert abs(lu_invar.realignment_kyfan(rho1) - 2 ** -0.5) < 1e-10
"#
    ));
}

#[test]
fn decompositions_and_invariants() {
    with_module(c_str!(
        r#"
rho = lu_invar.DensityMatrix.random([2, 3], 3, 5)
d = lu_invar.eigen_decomposition(rho)
assert len(d) == 3
mixed = d.mix(lu_invar.haar_unitary(3, 9))
for x, y in zip(d.f_invariants(), mixed.f_invariants()):
    assert abs(x - y) < 1e-9
padded = d.pad(4)
p = d.lambda_poly("det", 1)
q = padded.lambda_poly("det", 1)
assert all(abs(a - b) < 1e-9 for a, b in zip(q, [0] + p))
rebuilt = mixed.reconstruct()
for r, row in enumerate(rho.matrix):
    for c, v in enumerate(row):
        assert abs(rebuilt[r][c] - v) < 1e-12
"#
    ));
}

#[test]
fn errors_are_value_errors_with_kind() {
    with_module(c_str!(
        r#"
try:
    lu_invar.DensityMatrix([[1.5, 0], [0, -0.5]], [2])
except lu_invar.LuInvarError as e:
    assert isinstance(e, ValueError)
    assert str(e).startswith("NotPSD"), str(e)
else:
    raise AssertionError("expected NotPSD")
try:
    lu_invar.DensityMatrix.reference("nope")
except ValueError:
    pass
else:
    raise AssertionError("expected ValueError")
"#
    ));
}

#[test]
fn local_unitaries_leave_screen_inconclusive() {
    with_module(c_str!(
        r#"
rho = lu_invar.DensityMatrix.random([2, 2], 2, 1)
moved = rho.apply_local_unitaries([lu_invar.haar_unitary(2, 2), lu_invar.haar_unitary(2, 3)])
report = lu_invar.screen(rho, moved)
assert report.verdict == "Inconclusive", report
assert report.witness is None
assert all(c.passed for c in report.checks)
"#
    ));
}
