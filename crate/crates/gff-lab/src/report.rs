//! Run configuration and report emission. Reports are plain rows: one gated
//! comparison each, with enough metadata (seed, truncation, config hash) to
//! reproduce any row from the command line. Output is byte-deterministic:
//! rows are sorted, floats use a fixed format, and nothing records the clock.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{GffError, Result};

/// One verification row. `stderr` is zero and `z` meaningless for purely
/// deterministic checks; those carry their `residual` and tolerance note.
#[derive(Clone, Debug, Serialize)]
pub struct StatReport {
    pub suite: String,
    pub test: String,
    /// plain-language statement of the property being checked
    pub anchor: String,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: f64,
    pub z: f64,
    pub residual: Option<f64>,
    pub verdict: String,
    pub seed: u64,
    pub truncation: String,
    pub replicas: u64,
    pub note: String,
}

impl StatReport {
    /// Gated statistical comparison: pass iff |z| <= gate.
    #[allow(clippy::too_many_arguments)]
    pub fn statistical(
        suite: &str,
        test: &str,
        anchor: &str,
        estimate: f64,
        stderr: f64,
        reference: f64,
        gate: f64,
    ) -> Self {
        let z = crate::stats::z_score(estimate, reference, stderr);
        StatReport {
            suite: suite.to_string(),
            test: test.to_string(),
            anchor: anchor.to_string(),
            estimate,
            stderr,
            reference,
            z,
            residual: None,
            verdict: if z.abs() <= gate { "pass" } else { "fail" }.to_string(),
            seed: 0,
            truncation: String::new(),
            replicas: 0,
            note: format!("gate |z| <= {gate:.3}"),
        }
    }

    /// Deterministic comparison: pass iff residual <= tol.
    pub fn deterministic(
        suite: &str,
        test: &str,
        anchor: &str,
        estimate: f64,
        reference: f64,
        tol: f64,
    ) -> Self {
        let residual = (estimate - reference).abs();
        StatReport {
            suite: suite.to_string(),
            test: test.to_string(),
            anchor: anchor.to_string(),
            estimate,
            stderr: 0.0,
            reference,
            z: 0.0,
            residual: Some(residual),
            verdict: if residual <= tol { "pass" } else { "fail" }.to_string(),
            seed: 0,
            truncation: String::new(),
            replicas: 0,
            note: format!("tolerance {tol:.3e}"),
        }
    }

    /// Goodness-of-fit style verdict: pass iff the p-value clears the level.
    /// The estimate column carries the test statistic; z maps the p-value to
    /// a one-sided normal scale for eyeballing.
    pub fn from_pvalue(
        suite: &str,
        test: &str,
        anchor: &str,
        statistic: f64,
        p_value: f64,
        level: f64,
    ) -> Self {
        use statrs::distribution::{ContinuousCDF, Normal};
        let z = if p_value <= 0.0 {
            8.0
        } else if p_value >= 1.0 {
            0.0
        } else {
            Normal::new(0.0, 1.0)
                .unwrap()
                .inverse_cdf(1.0 - p_value)
                .clamp(-8.0, 8.0)
        };
        StatReport {
            suite: suite.to_string(),
            test: test.to_string(),
            anchor: anchor.to_string(),
            estimate: statistic,
            stderr: 0.0,
            reference: 0.0,
            z,
            residual: None,
            verdict: if p_value >= level { "pass" } else { "fail" }.to_string(),
            seed: 0,
            truncation: String::new(),
            replicas: 0,
            note: format!("p = {p_value:.4e}, level {level:.4e}"),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn with_note(mut self, note: &str) -> Self {
        if self.note.is_empty() {
            self.note = note.to_string();
        } else {
            self.note = format!("{}; {note}", self.note);
        }
        self
    }

    /// Stamp run provenance onto the row; a replica count already set by the
    /// suite (deterministic rows use 0) is kept.
    pub fn stamp(mut self, cfg: &RunConfig) -> Self {
        self.seed = cfg.seed;
        self.truncation = cfg.truncation_label();
        if self.replicas == 0 && self.stderr > 0.0 {
            self.replicas = cfg.replicas;
        }
        self
    }

    pub fn with_replicas(mut self, replicas: u64) -> Self {
        self.replicas = replicas;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub dim: usize,
    pub n_max: usize,
    pub k_max: usize,
    pub replicas: u64,
    pub seed: u64,
    pub suites: Vec<String>,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub tolerances: BTreeMap<String, f64>,
}

/// All fields optional: file values fill in, flags override afterwards.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub dim: Option<usize>,
    pub n_max: Option<usize>,
    pub k_max: Option<usize>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub suites: Option<Vec<String>>,
    pub out: Option<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn default_for_dim(dim: usize) -> Result<Self> {
        let (n_max, k_max) = match dim {
            2 => (24, 40),
            3 => (12, 24),
            _ => {
                return Err(GffError::Config(format!(
                    "dimension must be 2 or 3, got {dim}"
                )))
            }
        };
        Ok(RunConfig {
            dim,
            n_max,
            k_max,
            replicas: 100_000,
            seed: 7,
            suites: Vec::new(),
            out_dir: PathBuf::from("reports"),
            tolerances: BTreeMap::new(),
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let part: PartialConfig = toml::from_str(text)
            .map_err(|e| GffError::Config(format!("config parse error: {e}")))?;
        let mut cfg = Self::default_for_dim(part.dim.unwrap_or(2))?;
        cfg.apply(&part)?;
        Ok(cfg)
    }

    /// Overlay explicit values; truncation defaults track a dimension change
    /// unless the same source pins them.
    pub fn apply(&mut self, part: &PartialConfig) -> Result<()> {
        if let Some(dim) = part.dim {
            let fresh = Self::default_for_dim(dim)?;
            self.dim = dim;
            self.n_max = fresh.n_max;
            self.k_max = fresh.k_max;
        }
        if let Some(n) = part.n_max {
            self.n_max = n;
        }
        if let Some(k) = part.k_max {
            self.k_max = k;
        }
        if let Some(r) = part.replicas {
            self.replicas = r;
        }
        if let Some(s) = part.seed {
            self.seed = s;
        }
        if let Some(s) = &part.suites {
            self.suites = s.clone();
        }
        if let Some(o) = &part.out {
            self.out_dir = PathBuf::from(o);
        }
        for (k, v) in &part.tolerances {
            self.tolerances.insert(k.clone(), *v);
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(GffError::Config(format!(
                "dimension must be 2 or 3, got {}",
                self.dim
            )));
        }
        if self.k_max == 0 {
            return Err(GffError::Config("k_max must be positive".to_string()));
        }
        if self.replicas < 100 {
            return Err(GffError::Config(
                "need at least 100 replicas for the statistical gates".to_string(),
            ));
        }
        for (k, &v) in &self.tolerances {
            if !(v > 0.0) {
                return Err(GffError::Config(format!(
                    "tolerance {k} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn truncation_label(&self) -> String {
        format!("d={} N={} K={}", self.dim, self.n_max, self.k_max)
    }

    /// Canonical key=value rendering; the hash input and the echo format.
    /// The output directory is deliberately left out: it changes where
    /// files land, not what gets computed.
    pub fn canonical_string(&self) -> String {
        let mut s = format!(
            "dim={}\nn_max={}\nk_max={}\nreplicas={}\nseed={}\nsuites={}\n",
            self.dim,
            self.n_max,
            self.k_max,
            self.replicas,
            self.seed,
            self.suites.join(","),
        );
        for (k, v) in &self.tolerances {
            s.push_str(&format!("tolerance.{k}={v:e}\n"));
        }
        s
    }

    pub fn config_hash(&self) -> u64 {
        fnv1a(self.canonical_string().as_bytes())
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn sorted(reports: &[StatReport]) -> Vec<&StatReport> {
    let mut rows: Vec<&StatReport> = reports.iter().collect();
    rows.sort_by(|a, b| (&a.suite, &a.test).cmp(&(&b.suite, &b.test)));
    rows
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    seed: u64,
    truncation: String,
    config_hash: String,
    config: &'a RunConfig,
    failures: usize,
    reports: Vec<&'a StatReport>,
}

/// Full JSON report document, rows sorted by (suite, test).
pub fn write_json<W: Write>(cfg: &RunConfig, reports: &[StatReport], w: W) -> Result<()> {
    let doc = JsonDocument {
        seed: cfg.seed,
        truncation: cfg.truncation_label(),
        config_hash: format!("{:016x}", cfg.config_hash()),
        config: cfg,
        failures: reports.iter().filter(|r| !r.passed()).count(),
        reports: sorted(reports),
    };
    serde_json::to_writer_pretty(w, &doc)
        .map_err(|e| GffError::Io(std::io::Error::other(e)))?;
    Ok(())
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Flat CSV of the same rows; provenance rides in leading comment lines.
pub fn write_csv<W: Write>(cfg: &RunConfig, reports: &[StatReport], mut w: W) -> Result<()> {
    writeln!(w, "# seed={}", cfg.seed)?;
    writeln!(w, "# truncation={}", cfg.truncation_label())?;
    writeln!(w, "# config_hash={:016x}", cfg.config_hash())?;
    writeln!(
        w,
        "suite,test,anchor,estimate,stderr,reference,z,residual,verdict,seed,truncation,replicas,note"
    )?;
    for r in sorted(reports) {
        let residual = r.residual.map_or(String::new(), |v| format!("{v:.12e}"));
        writeln!(
            w,
            "{},{},{},{:.12e},{:.12e},{:.12e},{:.6},{},{},{},{},{},{}",
            csv_quote(&r.suite),
            csv_quote(&r.test),
            csv_quote(&r.anchor),
            r.estimate,
            r.stderr,
            r.reference,
            r.z,
            residual,
            r.verdict,
            r.seed,
            csv_quote(&r.truncation),
            r.replicas,
            csv_quote(&r.note),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = RunConfig::default_for_dim(2).unwrap();
        assert_eq!((cfg.n_max, cfg.k_max), (24, 40));
        let cfg3 = RunConfig::default_for_dim(3).unwrap();
        assert_eq!((cfg3.n_max, cfg3.k_max), (12, 24));
        assert!(RunConfig::default_for_dim(4).is_err());

        let mut cfg = RunConfig::from_toml_str("dim = 3\nseed = 42\nreplicas = 5000").unwrap();
        assert_eq!(cfg.dim, 3);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.n_max, 12);
        // a later dimension override resets the truncation defaults
        let part = PartialConfig {
            dim: Some(2),
            ..Default::default()
        };
        cfg.apply(&part).unwrap();
        assert_eq!(cfg.n_max, 24);
        // explicit truncation in the same overlay wins
        let part = PartialConfig {
            dim: Some(3),
            n_max: Some(5),
            ..Default::default()
        };
        cfg.apply(&part).unwrap();
        assert_eq!((cfg.n_max, cfg.k_max), (5, 24));
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(RunConfig::from_toml_str("dim = 7").is_err());
        assert!(RunConfig::from_toml_str("replicas = 3").is_err());
        assert!(RunConfig::from_toml_str("unknown_knob = 1").is_err());
        assert!(RunConfig::from_toml_str("[tolerances]\nconstancy = -1.0").is_err());
        assert!(RunConfig::from_toml_str("dim = 2\nk_max = 0").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::default_for_dim(2).unwrap();
        let b = RunConfig::default_for_dim(2).unwrap();
        assert_eq!(a.config_hash(), b.config_hash());
        let mut c = RunConfig::default_for_dim(2).unwrap();
        c.seed = 8;
        assert_ne!(a.config_hash(), c.config_hash());
        // classic reference vector for the hash itself
        assert_eq!(fnv1a(b"").wrapping_sub(0xcbf29ce484222325), 0);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
    }

    #[test]
    fn verdicts_follow_gates() {
        let r = StatReport::statistical("s", "t", "prop", 1.4, 0.1, 1.0, 3.0);
        assert!(!r.passed());
        assert!((r.z - 4.0).abs() < 1e-12);
        assert!(StatReport::statistical("s", "t", "p", 1.0, 0.1, 1.25, 3.0).passed());
        let d = StatReport::deterministic("s", "t", "p", 1.0 + 1e-12, 1.0, 1e-10);
        assert!(d.passed());
        assert!(!StatReport::deterministic("s", "t", "p", 1.1, 1.0, 1e-10).passed());
    }

    #[test]
    fn emission_is_sorted_and_deterministic() {
        let cfg = RunConfig::from_toml_str("dim = 2\nseed = 3").unwrap();
        let rows = vec![
            StatReport::statistical("zeta", "b", "p2", 1.0, 0.5, 1.0, 3.0).stamp(&cfg),
            StatReport::statistical("alpha", "a", "p1, with a comma", 0.0, 1.0, 0.0, 3.0)
                .stamp(&cfg),
        ];
        let mut json1 = Vec::new();
        write_json(&cfg, &rows, &mut json1).unwrap();
        let mut json2 = Vec::new();
        write_json(&cfg, &rows, &mut json2).unwrap();
        assert_eq!(json1, json2);
        let text = String::from_utf8(json1).unwrap();
        assert!(text.find("\"suite\": \"alpha\"").unwrap() < text.find("\"suite\": \"zeta\"").unwrap());
        assert!(text.contains("\"config_hash\""));

        let mut csv = Vec::new();
        write_csv(&cfg, &rows, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# seed=3"));
        assert!(lines[3].starts_with("suite,test,anchor"));
        assert!(lines[4].starts_with("alpha,a,\"p1, with a comma\""));
        assert!(lines[5].starts_with("zeta,b,p2"));
    }
}
