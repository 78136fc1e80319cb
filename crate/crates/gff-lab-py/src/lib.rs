//! Python bindings for the gff-lab core: eigenbasis construction plus
//! audits, kernel evaluation, exact and spectral sampling, pairings, and
//! the verification suites. Build the importable module with
//! `python/build_ext.sh`; the `extension-module` feature stays off for
//! plain `cargo test` so the test binary can embed the interpreter.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gff_lab::basis::{audit, Basis, BasisSpec};
use gff_lab::error::GffError;
use gff_lab::geom::Ball;
use gff_lab::kernels;
use gff_lab::pairing::{green_pairing_quadrature, spectral_from_overlaps};
use gff_lab::probe::Probe;
use gff_lab::report::{RunConfig, StatReport};
use gff_lab::sampler::{mc_sweep, ExactRadialSampler, Sampler};
use gff_lab::suites;

fn err(e: GffError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bump(center: Vec<f64>, eps: f64) -> PyResult<Probe> {
    Probe::bump(center, eps).map_err(err)
}

fn row_dict<'py>(py: Python<'py>, r: &StatReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("suite", &r.suite)?;
    d.set_item("test", &r.test)?;
    d.set_item("anchor", &r.anchor)?;
    d.set_item("estimate", r.estimate)?;
    d.set_item("stderr", r.stderr)?;
    d.set_item("reference", r.reference)?;
    d.set_item("z", r.z)?;
    d.set_item("residual", r.residual)?;
    d.set_item("passed", r.passed())?;
    d.set_item("note", &r.note)?;
    Ok(d)
}

/// A frozen eigenbasis with a seed, the handle everything else hangs off.
#[pyclass]
struct Lab {
    basis: Basis,
    #[pyo3(get)]
    seed: u64,
}

#[pymethods]
impl Lab {
    #[new]
    #[pyo3(signature = (dim, n_max=None, k_max=None, seed=7))]
    fn new(dim: usize, n_max: Option<usize>, k_max: Option<usize>, seed: u64) -> PyResult<Self> {
        let defaults = RunConfig::default_for_dim(dim).map_err(err)?;
        let spec = BasisSpec::new(
            dim,
            n_max.unwrap_or(defaults.n_max),
            k_max.unwrap_or(defaults.k_max),
        )
        .map_err(err)?;
        Ok(Lab {
            basis: Basis::build(spec).map_err(err)?,
            seed,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.basis.spec.dim
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.basis.spec.n_max
    }

    #[getter]
    fn k_max(&self) -> usize {
        self.basis.spec.k_max
    }

    fn mode_count(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormality, eigen-equation, and boundary checks as a dict.
    fn audit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let a = audit(&self.basis).map_err(err)?;
        let d = PyDict::new_bound(py);
        d.set_item("psi_gram_dev", a.psi_gram_dev)?;
        d.set_item("mode_gram_dev", a.mode_gram_dev)?;
        d.set_item("max_eigen_residual", a.max_eigen_residual)?;
        d.set_item("max_boundary_residual", a.max_boundary_residual)?;
        d.set_item("passes", a.passes())?;
        Ok(d)
    }

    /// Overlap coefficients of a mollifier bump against every mode.
    fn bump_overlaps(&self, center: Vec<f64>, eps: f64) -> PyResult<Vec<f64>> {
        bump(center, eps)?.overlaps(&self.basis).map_err(err)
    }

    /// Truncated-model pairing of two bumps (the exact Monte Carlo
    /// expectation under this basis).
    fn spectral_pairing(
        &self,
        center_a: Vec<f64>,
        eps_a: f64,
        center_b: Vec<f64>,
        eps_b: f64,
    ) -> PyResult<f64> {
        let oa = bump(center_a, eps_a)?.overlaps(&self.basis).map_err(err)?;
        let ob = bump(center_b, eps_b)?.overlaps(&self.basis).map_err(err)?;
        Ok(spectral_from_overlaps(&self.basis, &oa, &ob))
    }

    /// Monte Carlo sweep of field pairings against a list of bumps given as
    /// (center, eps) tuples; returns one row of pairings per replica.
    #[pyo3(signature = (probes, replicas, lane=0))]
    fn sample_pairings(
        &self,
        probes: Vec<(Vec<f64>, f64)>,
        replicas: u64,
        lane: u64,
    ) -> PyResult<Vec<Vec<f64>>> {
        let overlaps: Vec<Vec<f64>> = probes
            .into_iter()
            .map(|(c, e)| bump(c, e)?.overlaps(&self.basis).map_err(err))
            .collect::<PyResult<_>>()?;
        let refs: Vec<&[f64]> = overlaps.iter().map(|v| v.as_slice()).collect();
        Ok(mc_sweep(
            &Sampler::new(&self.basis, self.seed),
            lane,
            replicas,
            &refs,
        ))
    }

    /// Run one verification suite; returns report rows as dicts.
    fn run_suite<'py>(
        &self,
        py: Python<'py>,
        name: &str,
        replicas: u64,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let mut cfg = RunConfig::default_for_dim(self.basis.spec.dim).map_err(err)?;
        cfg.n_max = self.basis.spec.n_max;
        cfg.k_max = self.basis.spec.k_max;
        cfg.replicas = replicas;
        cfg.seed = self.seed;
        let rows = suites::run_suite(name, &cfg, &self.basis).map_err(err)?;
        rows.iter().map(|r| row_dict(py, r)).collect()
    }
}

/// Radial profile of the free kernel: -log r in d=2, r^(2-d) above.
#[pyfunction]
fn scaling_s(dim: usize, r: f64) -> f64 {
    kernels::scaling_s(dim, r)
}

/// Zero-boundary kernel of the unit ball.
#[pyfunction]
fn green_unit_ball(dim: usize, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    kernels::green_unit_ball(dim, &x, &y).map_err(err)
}

/// Zero-boundary kernel of an arbitrary ball.
#[pyfunction]
fn green_ball(center: Vec<f64>, radius: f64, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let ball = Ball::new(center, radius).map_err(err)?;
    kernels::green_ball(&ball, &x, &y).map_err(err)
}

/// Double kernel integral of two bumps in the unit ball, the covariance
/// oracle the Monte Carlo suites gate against.
#[pyfunction]
fn pair_quadrature(
    dim: usize,
    center_a: Vec<f64>,
    eps_a: f64,
    center_b: Vec<f64>,
    eps_b: f64,
) -> PyResult<f64> {
    green_pairing_quadrature(
        &Ball::unit(dim),
        &bump(center_a, eps_a)?,
        &bump(center_b, eps_b)?,
    )
    .map_err(err)
}

/// Exact sphere-average draws around the origin: returns (variance,
/// standard error) per radius from a Cholesky sampler that bypasses the
/// spectral truncation entirely.
#[pyfunction]
#[pyo3(signature = (dim, radii, replicas, seed=7))]
fn sphere_average_variance(
    dim: usize,
    radii: Vec<f64>,
    replicas: u64,
    seed: u64,
) -> PyResult<Vec<(f64, f64)>> {
    let ex = ExactRadialSampler::new(dim, &radii, seed).map_err(err)?;
    let sweep = ex.sweep(0, replicas);
    (0..radii.len())
        .map(|i| {
            let col: Vec<f64> = sweep.iter().map(|row| row[i]).collect();
            let m = gff_lab::stats::moments(&col).map_err(err)?;
            Ok((m.var, m.se_var))
        })
        .collect()
}

/// Names of the available verification suites.
#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    suites::suite_names().to_vec()
}

#[pymodule]
#[pyo3(name = "gff_lab")]
fn pymod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lab>()?;
    m.add_function(wrap_pyfunction!(scaling_s, m)?)?;
    m.add_function(wrap_pyfunction!(green_unit_ball, m)?)?;
    m.add_function(wrap_pyfunction!(green_ball, m)?)?;
    m.add_function(wrap_pyfunction!(pair_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_average_variance, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lab_constructs_and_audits() {
        pyo3::prepare_freethreaded_python();
        let lab = Lab::new(2, Some(4), Some(6), 1).unwrap();
        assert_eq!(lab.mode_count(), 9 * 6);
        Python::with_gil(|py| {
            let a = lab.audit(py).unwrap();
            let passes: bool = a.get_item("passes").unwrap().unwrap().extract().unwrap();
            assert!(passes);
        });
        let v = lab
            .spectral_pairing(vec![0.0, 0.0], 0.3, vec![0.0, 0.0], 0.3)
            .unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
}
