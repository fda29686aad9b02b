//! Python module `szpiro`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use szpiro_core::abc::{frey_disc_check, scan, AbcTriple, ScanConfig, DEFAULT_TOP};
use szpiro_core::arith::{factor as factor_natural, parse_rational, Factorization, Natural};
use szpiro_core::certifier::{certify as certify_point, CertifierConfig};
use szpiro_core::elliptic::{Point, WeierstrassModel};
use szpiro_core::heights::{canonical_height as height, local_heights as locals, HeightMethod, PrecisionTarget};
use szpiro_core::szpiro::{depleted_ratio, szpiro_ratio};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn factorization(n: &str) -> PyResult<Factorization> {
    if n.contains('^') || n.contains('*') {
        return n.parse().map_err(value_err);
    }
    let v: Natural = n.trim().parse().map_err(|_| PyValueError::new_err(format!("not a positive integer: {n}")))?;
    factor_natural(&v).map_err(value_err)
}

fn model(ainvs: Vec<String>) -> PyResult<WeierstrassModel> {
    let [a1, a2, a3, a4, a6]: [String; 5] =
        ainvs.try_into().map_err(|_| PyValueError::new_err("expected five coefficients"))?;
    let r = |s: &str| parse_rational(s).map_err(value_err);
    WeierstrassModel::new(r(&a1)?, r(&a2)?, r(&a3)?, r(&a4)?, r(&a6)?).map_err(value_err)
}

fn point(e: &WeierstrassModel, xy: (String, String)) -> PyResult<Point> {
    let p = Point::affine(parse_rational(&xy.0).map_err(value_err)?, parse_rational(&xy.1).map_err(value_err)?);
    e.check_point(&p).map_err(value_err)?;
    Ok(p)
}

/// Prime factorization as `(prime, exponent)` pairs, primes as strings.
#[pyfunction]
fn factor(n: &str) -> PyResult<Vec<(String, u32)>> {
    Ok(factorization(n)?.entries().iter().map(|(p, e)| (p.to_string(), *e)).collect())
}

#[pyfunction]
fn sigma(n: &str) -> PyResult<f64> {
    Ok(szpiro_ratio(&factorization(n)?))
}

/// `(value, removed, kept)` with the parts written as factorizations.
#[pyfunction]
fn sigma_depleted(n: &str, j: usize) -> PyResult<(f64, String, String)> {
    let f = factorization(n)?;
    let r = depleted_ratio(&f, j);
    Ok((r.value, r.removed_part(&f).to_string(), r.kept_part(&f).to_string()))
}

#[pyfunction]
#[pyo3(signature = (ainvs, point_xy, method = "sum-of-local", precision = 1e-10))]
fn canonical_height(ainvs: Vec<String>, point_xy: (String, String), method: &str, precision: f64) -> PyResult<f64> {
    let e = model(ainvs)?;
    let p = point(&e, point_xy)?;
    let m = match method {
        "sum-of-local" => HeightMethod::SumOfLocal,
        "doubling" => HeightMethod::DoublingLimit,
        other => return Err(PyValueError::new_err(format!("unknown method {other}"))),
    };
    height(&e, &p, m, PrecisionTarget(precision)).map_err(value_err)
}

/// `(place, lambda)` for every place with a nonzero contribution.
#[pyfunction]
#[pyo3(signature = (ainvs, point_xy, precision = 1e-10))]
fn local_heights(ainvs: Vec<String>, point_xy: (String, String), precision: f64) -> PyResult<Vec<(String, f64)>> {
    let e = model(ainvs)?;
    let p = point(&e, point_xy)?;
    let parts = locals(&e, &p, PrecisionTarget(precision)).map_err(value_err)?;
    Ok(parts.into_iter().map(|b| (b.place.to_string(), b.lambda)).collect())
}

/// The certificate as a JSON string.
#[pyfunction]
#[pyo3(signature = (ainvs, point_xy, j = 1, k_cap = 1_000_000))]
fn certify(ainvs: Vec<String>, point_xy: (String, String), j: usize, k_cap: u64) -> PyResult<String> {
    let e = model(ainvs)?;
    let p = point(&e, point_xy)?;
    let config = CertifierConfig { j, k_cap, ..CertifierConfig::default() };
    let cert = certify_point(&e.ainvs_string(), &e, &p, &config).map_err(value_err)?;
    serde_json::to_string(&cert).map_err(value_err)
}

/// `(minimal discriminant, "2^4" or "2^-8")` for the Frey curve of `(a, b, -a-b)`.
#[pyfunction]
fn frey(a: u64, b: u64) -> PyResult<(String, Option<String>)> {
    let t = AbcTriple::new(a, b).map_err(value_err)?;
    let r = frey_disc_check(&t);
    Ok((r.disc_min.to_string(), r.case.map(|c| c.to_string())))
}

/// The scan tables as CSV.
#[pyfunction]
#[pyo3(signature = (max_sum, j_max, j_min = 0, top = DEFAULT_TOP, workers = None))]
fn abc_scan(py: Python<'_>, max_sum: u64, j_max: usize, j_min: usize, top: usize, workers: Option<usize>) -> PyResult<String> {
    let config = ScanConfig { max_sum, j_min, j_max, top, workers };
    let table = py.detach(|| scan(&config)).map_err(value_err)?;
    Ok(table.to_csv())
}

#[pymodule]
fn szpiro(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_depleted, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_height, m)?)?;
    m.add_function(wrap_pyfunction!(local_heights, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(frey, m)?)?;
    m.add_function(wrap_pyfunction!(abc_scan, m)?)?;
    Ok(())
}
