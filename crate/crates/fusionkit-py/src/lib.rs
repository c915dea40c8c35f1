use pyo3::prelude::*;
#[pymodule]
fn fusionkit_py(_m: &Bound<'_, PyModule>) -> PyResult<()> { Ok(()) }
