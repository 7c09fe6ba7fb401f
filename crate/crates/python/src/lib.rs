//! Python bindings. Ideals are built from variable names and generator
//! strings; faces come back as lists of `(i, j)` vertex pairs.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use l2morse_core::betti::{self, Field};
use l2morse_core::complex::SimplicialComplex;
use l2morse_core::divrel::{self, DivRel};
use l2morse_core::extremal;
use l2morse_core::monomial::MonomialIdeal;
use l2morse_core::morse::{self, MorseOptions};
use l2morse_core::suites;

type Pair = (usize, usize);
type Rel = (usize, Vec<usize>);
/// `(name, passed, expected, got)` for one suite check.
type CheckRow = (String, bool, String, String);

fn err(e: l2morse_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(name: &str) -> PyResult<Field> {
    name.parse().map_err(err)
}

fn rel_tuple(r: &DivRel) -> Rel {
    (r.b(), r.set())
}

fn to_rels(rels: Vec<Rel>) -> PyResult<Vec<DivRel>> {
    rels.into_iter()
        .map(|(b, set)| DivRel::new(b, set).map_err(err))
        .collect()
}

/// A monomial ideal with ordered generators.
#[pyclass(name = "Ideal", frozen)]
pub struct PyIdeal(MonomialIdeal);

#[pymethods]
impl PyIdeal {
    #[new]
    fn new(variables: Vec<String>, generators: Vec<String>) -> PyResult<Self> {
        MonomialIdeal::parse(&variables, &generators)
            .map(PyIdeal)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        MonomialIdeal::from_json(text).map(PyIdeal).map_err(err)
    }

    /// `E_{q,D}` raised to `power`, with `D` given as `(b, [i, j, ...])` tuples.
    #[staticmethod]
    #[pyo3(signature = (q, relations, power = 1))]
    fn extremal(q: usize, relations: Vec<Rel>, power: usize) -> PyResult<Self> {
        let d = to_rels(relations)?;
        extremal::power_generators(q, &d, power)
            .map(PyIdeal)
            .map_err(err)
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.0.ring().names().to_vec()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.0.generators().iter().map(|g| g.to_string()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Ideal({})", self.generators().join(", "))
    }

    fn power(&self, r: usize) -> PyResult<Self> {
        self.0.power(r).map(PyIdeal).map_err(err)
    }

    fn minimalize(&self) -> Self {
        PyIdeal(self.0.minimalize())
    }

    fn is_minimally_generated(&self) -> bool {
        self.0.is_minimally_generated()
    }

    fn relation_holds(&self, b: usize, set: Vec<usize>) -> PyResult<bool> {
        let r = DivRel::new(b, set).map_err(err)?;
        divrel::relation_holds(&self.0, &r).map_err(err)
    }

    /// `(all, minimal)` held relations as `(b, [B])` tuples.
    fn relations(&self) -> PyResult<(Vec<Rel>, Vec<Rel>)> {
        let r = divrel::all_relations(&self.0).map_err(err)?;
        Ok((
            r.all.iter().map(rel_tuple).collect(),
            r.minimal.iter().map(rel_tuple).collect(),
        ))
    }

    /// Total Betti numbers. Generators must be minimal; call `minimalize()` first otherwise.
    #[pyo3(signature = (field = "gf2"))]
    fn betti(&self, py: Python<'_>, field: &str) -> PyResult<Vec<usize>> {
        let f = self::field(field)?;
        py.detach(|| betti::total_betti(&self.0, f)).map_err(err)
    }

    /// Non-zero graded Betti numbers as `(i, degree, value)`.
    #[pyo3(signature = (field = "gf2"))]
    fn graded_betti(&self, py: Python<'_>, field: &str) -> PyResult<Vec<(usize, String, usize)>> {
        let f = self::field(field)?;
        let t = py.detach(|| betti::graded_betti(&self.0, f)).map_err(err)?;
        Ok(t.entries
            .into_iter()
            .map(|e| (e.i, e.degree, e.value))
            .collect())
    }

    #[pyo3(signature = (field = "gf2"))]
    fn projective_dimension(&self, py: Python<'_>, field: &str) -> PyResult<usize> {
        Ok(self.betti(py, field)?.len() - 1)
    }

    /// The ideal file format read by `from_json`.
    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_file()).expect("ideal file serializes")
    }
}

/// f-vector of `"taylor"` or `"l2"` on `q` generators, empty face first.
#[pyfunction]
fn f_vector(kind: &str, q: usize) -> PyResult<Vec<usize>> {
    let c = match kind {
        "taylor" => SimplicialComplex::taylor(q),
        "l2" => SimplicialComplex::l2(q),
        _ => return Err(PyValueError::new_err("kind must be 'taylor' or 'l2'")),
    }
    .map_err(err)?;
    Ok(c.f_vector())
}

#[pyfunction]
fn critical_counts(q: usize, s: usize) -> PyResult<Vec<usize>> {
    Ok(morse::matching_l2(q, s).map_err(err)?.critical_counts())
}

/// Critical cells of `M_{q,delta}`, grouped by dimension.
#[pyfunction]
fn critical_cells(q: usize, s: usize) -> PyResult<Vec<Vec<Vec<Pair>>>> {
    let opts = MorseOptions {
        order: false,
        cross_check: false,
    };
    let mc = morse::morse_complex(q, s, opts).map_err(err)?;
    Ok(mc
        .cells
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|&f| mc.face_json(f).into_iter().map(|[i, j]| (i, j)).collect())
                .collect()
        })
        .collect())
}

/// `(sigma, tau)` pairs of the cell order between adjacent dimensions.
#[pyfunction]
#[pyo3(signature = (q, s, cross_check = false))]
fn cell_order(
    py: Python<'_>,
    q: usize,
    s: usize,
    cross_check: bool,
) -> PyResult<Vec<(Vec<Pair>, Vec<Pair>)>> {
    let opts = MorseOptions {
        order: true,
        cross_check,
    };
    let mc = py
        .detach(|| morse::morse_complex(q, s, opts))
        .map_err(err)?;
    let pairs = |f| mc.face_json(f).into_iter().map(|[i, j]| (i, j)).collect();
    Ok(mc
        .order
        .iter()
        .map(|&(a, b)| (pairs(a), pairs(b)))
        .collect())
}

/// `(pd E_{q,D}, pd E_{q,D}^2)` for `D = {(1, {2..s})}`.
#[pyfunction]
fn pd_formula(q: usize, s: usize) -> PyResult<(usize, usize)> {
    betti::pd_formula(q, s).map_err(err)
}

/// Relations on the generators of `I^2`, as `(kind, b, [B])`.
#[pyfunction]
#[pyo3(signature = (q, s = None))]
fn predicted_square_relations(
    q: usize,
    s: Option<usize>,
) -> PyResult<Vec<(String, usize, Vec<usize>)>> {
    Ok(divrel::predicted_square_relations(q, s)
        .map_err(err)?
        .into_iter()
        .map(|p| (format!("{:?}", p.kind), p.rel.b(), p.rel.set()))
        .collect())
}

/// Runs one named suite; returns `(passed, [(check, passed, expected, got)])`.
#[pyfunction]
#[pyo3(signature = (suite, qmax = None, seed = 0, trials = 100))]
fn verify(
    py: Python<'_>,
    suite: &str,
    qmax: Option<usize>,
    seed: u64,
    trials: usize,
) -> PyResult<(bool, Vec<CheckRow>)> {
    let report = py
        .detach(|| match suite {
            "table1" => suites::table1(),
            "examples" => suites::examples(),
            "pd" => suites::pd(qmax.unwrap_or(6)),
            "characterization" => suites::characterization(qmax.unwrap_or(5)),
            "engine" => suites::engine(qmax.unwrap_or(6)),
            "random" => suites::random_ideal_suite(seed, trials),
            "cell-order" => suites::cell_order(),
            "first-power" => suites::first_power(),
            other => Err(l2morse_core::Error::Input(format!("unknown suite {other}"))),
        })
        .map_err(err)?;
    Ok((
        report.passed,
        report
            .checks
            .into_iter()
            .map(|c| (c.name, c.passed, c.expected, c.got))
            .collect(),
    ))
}

#[pymodule]
mod l2morse {
    #[pymodule_export]
    use super::{
        cell_order, critical_cells, critical_counts, f_vector, pd_formula,
        predicted_square_relations, verify, PyIdeal,
    };
}
