use std::ffi::CString;

use pyo3::prelude::*;

use eigencond_py::eigencond_module;

const SCRIPT: &str = r#"
import math
import eigencond as ec

c = ec.lattice_points(7)
assert len(c) == 7 and c.min_separation == 1.0
r = ec.condition_report_diagonal(c)
assert abs(r.kappa_max_frob - math.sqrt(6)) < 1e-12

full = ec.condition_report([[0, 1], [0, 1]])
assert all(abs(p.kappa_lambda - math.sqrt(2)) < 1e-12 for p in full.eigenpairs)

try:
    ec.condition_report([[1, 0], [0, 1]])
    raise AssertionError("expected IllPosedError")
except ec.IllPosedError:
    pass

try:
    ec.lattice_points(0)
    raise AssertionError("expected ValueError")
except ValueError:
    pass

frob, op = ec.reproduce(1000)
assert frob.relative_deviation < 0.03 and op.relative_deviation < 0.03
o = ec.optimize(2, init="random", seed=3)
assert abs(o.objective - 1 / math.sqrt(2)) < 1e-3
"#;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(eigencond_module);
    Python::initialize();
    Python::attach(|py| {
        let code = CString::new(SCRIPT).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            e.print(py);
            panic!("python script failed");
        }
    });
}
