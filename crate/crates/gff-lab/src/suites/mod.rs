//! Verification suites: each one turns a family of model properties into
//! gated report rows. Suites share one master seed but own disjoint lane
//! blocks, so adding replicas to one suite never perturbs another, and the
//! whole run is reproducible from (config, seed) alone.

pub mod bounds;
pub mod constancy;
pub mod covariance;
pub mod dmp;
pub mod exits;
pub mod gaussianity;
pub mod radial;
pub mod scaling;
pub mod zero_boundary;

use crate::basis::Basis;
use crate::error::{GffError, Result};
use crate::report::{RunConfig, StatReport};
use crate::sampler::Sampler;

pub struct SuiteCtx<'a> {
    pub cfg: &'a RunConfig,
    pub basis: &'a Basis,
    /// first lane of this suite's block of 16
    pub lane0: u64,
}

impl SuiteCtx<'_> {
    pub fn sampler(&self) -> Sampler<'_> {
        Sampler::new(self.basis, self.cfg.seed)
    }

    pub fn lane(&self, k: u64) -> u64 {
        debug_assert!(k < 16);
        self.lane0 + k
    }
}

/// Column j of a replica-major sweep result.
pub(crate) fn col(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

/// Point in the equatorial plane, padded with zeros in dimension 3.
pub(crate) fn point(dim: usize, x: f64, y: f64) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    p[0] = x;
    p[1] = y;
    p
}

type SuiteFn = fn(&SuiteCtx) -> Result<Vec<StatReport>>;

/// Registered suites in registry order; the index fixes the lane block.
pub const REGISTRY: &[(&str, SuiteFn)] = &[
    ("bounds", bounds::run),
    ("constancy", constancy::run),
    ("covariance", covariance::run),
    ("dmp", dmp::run),
    ("gaussianity", gaussianity::run),
    ("radial", radial::run),
    ("scaling", scaling::run),
    ("wos", exits::run),
    ("zeroboundary", zero_boundary::run),
];

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

pub fn run_suite(name: &str, cfg: &RunConfig, basis: &Basis) -> Result<Vec<StatReport>> {
    let idx = REGISTRY
        .iter()
        .position(|(n, _)| *n == name)
        .ok_or_else(|| {
            GffError::Config(format!(
                "unknown suite name: {name} (known: {})",
                suite_names().join(", ")
            ))
        })?;
    let ctx = SuiteCtx {
        cfg,
        basis,
        lane0: 16 * idx as u64,
    };
    let rows = (REGISTRY[idx].1)(&ctx)?;
    Ok(rows.into_iter().map(|r| r.stamp(cfg)).collect())
}

/// Run the selected suites (all registered ones when the selection is
/// empty) and return the combined rows.
pub fn run_selected(cfg: &RunConfig, basis: &Basis) -> Result<Vec<StatReport>> {
    let names: Vec<String> = if cfg.suites.is_empty() {
        suite_names().iter().map(|s| s.to_string()).collect()
    } else {
        cfg.suites.clone()
    };
    // validate before running anything so unknown names fail fast
    for n in &names {
        if !REGISTRY.iter().any(|(r, _)| r == n) {
            return Err(GffError::Config(format!(
                "unknown suite name: {n} (known: {})",
                suite_names().join(", ")
            )));
        }
    }
    let mut all = Vec::new();
    for n in &names {
        all.extend(run_suite(n, cfg, basis)?);
    }
    Ok(all)
}
