//! Python bindings: `import idpp_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use idpp::bench::{bench_engines, BenchConfig};
use idpp::engine::{build_engine, DcEngine, EngineKind, SplitReport};
use idpp::format::{parse_binary, parse_matrix, write_binary, write_matrix};
use idpp::gen::{generate, GenConfig, GenKind};
use idpp::graph::{build_graph, VertexId};
use idpp::matrix::{BinaryMatrix, IncompleteMatrix};
use idpp::phylogeny::Phylogeny;
use idpp::solver::{solve_with_stats, Solution as CoreSolution};
use idpp::verify::{brute_force_idpp, check_completion, is_laminar, tree_explains};

type Members = (Vec<usize>, Vec<usize>);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn engine_kind(name: &str) -> PyResult<EngineKind> {
    name.parse().map_err(value_err)
}

fn binary_rows(b: &BinaryMatrix) -> Vec<String> {
    (0..b.n()).map(|s| (0..b.m()).map(|c| if b.get(s, c) { '1' } else { '0' }).collect()).collect()
}

/// A species-by-character matrix over `0`, `1` and `?`.
#[pyclass(name = "Matrix", frozen)]
pub struct PyMatrix {
    inner: IncompleteMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<String>) -> PyResult<Self> {
        IncompleteMatrix::from_rows(&rows).map(|inner| Self { inner }).map_err(value_err)
    }

    /// Parses the text file format (header line `n m`, then one row per line).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_matrix(text).map(|inner| Self { inner }).map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn rows(&self) -> Vec<String> {
        (0..self.inner.n()).map(|s| self.inner.row_string(s)).collect()
    }

    fn unknown_count(&self) -> usize {
        self.inner.unknown_count()
    }

    fn to_text(&self) -> String {
        write_matrix(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{}, {} unknown)", self.inner.n(), self.inner.m(), self.inner.unknown_count())
    }
}

/// Result of `solve`.
#[pyclass(name = "Solution", frozen)]
pub struct PySolution {
    inner: CoreSolution,
    rounds: usize,
    total_ops: u64,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn is_yes(&self) -> bool {
        self.inner.is_yes()
    }

    /// Completed rows, or `None` for an unsolvable matrix.
    fn completion(&self) -> Option<Vec<String>> {
        self.inner.completion().map(binary_rows)
    }

    fn completion_text(&self) -> Option<String> {
        self.inner.completion().map(write_binary)
    }

    fn newick(&self) -> Option<String> {
        self.inner.tree().map(Phylogeny::newick)
    }

    /// Newick plus the vacuous-character line, as written by the CLI.
    fn tree_text(&self) -> Option<String> {
        self.inner.tree().map(|t| t.to_string())
    }

    /// `(species, characters)` of the blocking component.
    fn witness(&self) -> Option<Members> {
        self.inner.witness().map(|w| (w.species.clone(), w.chars.clone()))
    }

    #[getter]
    fn rounds(&self) -> usize {
        self.rounds
    }

    #[getter]
    fn total_ops(&self) -> u64 {
        self.total_ops
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            CoreSolution::Yes { tree, .. } => format!("Solution(yes, {})", tree.newick()),
            CoreSolution::No { witness } => {
                format!("Solution(no, species={:?}, characters={:?})", witness.species, witness.chars)
            }
        }
    }
}

/// Decremental connectivity over the solid edges of a matrix.
#[pyclass(name = "Engine", unsendable)]
pub struct PyEngine {
    inner: Box<dyn DcEngine>,
}

fn members(species: &[usize], chars: &[usize]) -> Members {
    let (mut s, mut c) = (species.to_vec(), chars.to_vec());
    s.sort_unstable();
    c.sort_unstable();
    (s, c)
}

fn report_children(r: &SplitReport) -> Vec<Members> {
    r.children.iter().map(|ch| members(&ch.species, &ch.chars)).collect()
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (matrix, kind = "optimal"))]
    fn new(matrix: &PyMatrix, kind: &str) -> PyResult<Self> {
        Ok(Self { inner: build_engine(engine_kind(kind)?, &build_graph(&matrix.inner)) })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn is_active(&self, c: usize) -> bool {
        self.inner.is_active(c)
    }

    /// Removes character `c`; returns the pieces of its former component,
    /// each as sorted `(species, characters)`.
    fn deactivate(&mut self, c: usize) -> PyResult<Vec<Members>> {
        if c >= self.inner.n_chars() {
            return Err(value_err(format!("character {c} out of range")));
        }
        self.inner.deactivate(c).map(|r| report_children(&r)).map_err(value_err)
    }

    fn deactivate_batch(&mut self, chars: Vec<usize>) -> PyResult<Vec<Vec<Members>>> {
        if let Some(&c) = chars.iter().find(|&&c| c >= self.inner.n_chars()) {
            return Err(value_err(format!("character {c} out of range")));
        }
        let reports = self.inner.deactivate_batch(&chars).map_err(value_err)?;
        Ok(reports.iter().map(report_children).collect())
    }

    /// Current components as sorted `(species, characters)` pairs.
    fn components(&self) -> Vec<Members> {
        let p = self.inner.query().partition();
        p.sets()
            .iter()
            .map(|set| {
                let pick = |f: fn(VertexId) -> bool| set.iter().filter(|v| f(**v)).map(|v| v.index).collect();
                (pick(VertexId::is_species), pick(VertexId::is_character))
            })
            .collect()
    }

    #[getter]
    fn ops(&self) -> u64 {
        self.inner.ops()
    }
}

/// Decides a matrix. `engine` is one of `naive`, `sparse`, `optimal`.
#[pyfunction]
#[pyo3(signature = (matrix, engine = "optimal"))]
fn solve(matrix: &PyMatrix, engine: &str) -> PyResult<PySolution> {
    let (inner, stats) = solve_with_stats(&matrix.inner, engine_kind(engine)?);
    Ok(PySolution { inner, rounds: stats.rounds, total_ops: stats.total_ops() })
}

/// Seeded instance. `kind` is `yes`, `no` or `random`.
#[pyfunction]
#[pyo3(signature = (kind, n, m, seed = 0, mask_prob = 0.0, density = 0.5))]
fn gen(kind: &str, n: usize, m: usize, seed: u64, mask_prob: f64, density: f64) -> PyResult<PyMatrix> {
    let kind = match kind.parse::<GenKind>().map_err(value_err)? {
        GenKind::RandomGraph { .. } => GenKind::RandomGraph { density },
        k => k,
    };
    generate(&GenConfig::new(kind, n, m, seed, mask_prob)).map(|inner| PyMatrix { inner }).map_err(value_err)
}

/// Exhaustive check over every completion; small matrices only.
#[pyfunction]
#[pyo3(signature = (matrix, max_unknowns = 12))]
fn brute_force(matrix: &PyMatrix, max_unknowns: usize) -> PyResult<bool> {
    brute_force_idpp(&matrix.inner, max_unknowns).map_err(value_err)
}

/// True when no two columns of the 0/1 rows overlap without nesting.
#[pyfunction]
fn laminar(rows: Vec<String>) -> PyResult<bool> {
    BinaryMatrix::from_rows(&rows).map(|b| is_laminar(&b)).map_err(value_err)
}

/// Checks a completion (0/1 rows or file text) and tree text against `matrix`.
/// Returns a list of problems, empty when both certificates hold.
#[pyfunction]
fn verify(matrix: &PyMatrix, completion: &Bound<'_, PyAny>, tree: &str) -> PyResult<Vec<String>> {
    let b = match completion.extract::<Vec<String>>() {
        Ok(rows) => BinaryMatrix::from_rows(&rows),
        Err(_) => parse_binary(&completion.extract::<String>()?),
    }
    .map_err(value_err)?;
    let t = Phylogeny::parse(tree).map_err(value_err)?;
    let mut problems = Vec::new();
    match check_completion(&matrix.inner, &b) {
        Ok(true) => {}
        Ok(false) => problems.push("completion disagrees with a known entry".to_string()),
        Err(e) => problems.push(e.to_string()),
    }
    if !is_laminar(&b) {
        problems.push("completion is not laminar".to_string());
    }
    if let Err(v) = tree_explains(&t, &b) {
        problems.push(v.to_string());
    }
    Ok(problems)
}

/// Operation counts per (size, engine, trial) as dicts.
#[pyfunction(name = "bench")]
#[pyo3(signature = (sizes, engines = None, trials = 1, seed = 0))]
fn run_bench<'py>(
    py: Python<'py>,
    sizes: Vec<usize>,
    engines: Option<Vec<String>>,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let engines = match engines {
        Some(names) => names.iter().map(|e| engine_kind(e)).collect::<PyResult<_>>()?,
        None => EngineKind::ALL.to_vec(),
    };
    let cfg = BenchConfig { sizes, engines, trials, seed, wall_clock: false };
    let reports = py.detach(|| bench_engines(&cfg));
    reports
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("engine", r.engine)?;
            d.set_item("n", r.n)?;
            d.set_item("m", r.m)?;
            d.set_item("total_ops", r.total_ops)?;
            d.set_item("per_deactivation_ops", r.per_deactivation_ops)?;
            d.set_item("splits_observed", r.splits_observed)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn idpp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(laminar, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}
