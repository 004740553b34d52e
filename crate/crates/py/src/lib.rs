use pyo3::prelude::*;

#[pymodule]
fn propseg_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
