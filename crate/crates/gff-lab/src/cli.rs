//! Command-line front end: configuration assembly from file plus flag
//! overrides, and the three commands (basis manifest, verification run,
//! plot-ready curves). Exit code 0 means success, 1 a usage or
//! configuration problem, 2 a failed verification or audit.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::basis::{audit, Basis, BasisSpec};
use crate::error::{GffError, Result};
use crate::kernels::{green_unit_ball, scaling_s};
use crate::report::{write_csv, write_json, PartialConfig, RunConfig, StatReport};
use crate::sampler::ExactRadialSampler;
use crate::stats;
use crate::suites;

#[derive(Parser, Debug)]
#[command(
    name = "gff-lab",
    version,
    about = "Zero-boundary Gaussian free field laboratory on the unit ball"
)]
pub struct Cli {
    /// TOML config file; flags below override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// ambient dimension (2 or 3)
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// master seed for every replica stream
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// replicas per Monte Carlo sweep
    #[arg(long, global = true)]
    replicas: Option<u64>,

    /// harmonic degree cutoff
    #[arg(long, global = true)]
    n_max: Option<usize>,

    /// radial depth per degree
    #[arg(long, global = true)]
    k_max: Option<usize>,

    /// comma-separated suite subset (default: all)
    #[arg(long, global = true, value_delimiter = ',', value_name = "NAMES")]
    suites: Option<Vec<String>>,

    /// output directory for reports and data files
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the eigenbasis, audit it, and write the mode manifest
    Basis,
    /// Run verification suites and write JSON and CSV reports
    Verify,
    /// Write plot-ready curves (variance profile, kernel section, bound ratio)
    Plotdata,
}

fn assemble_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                GffError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::from_toml_str(&text)?
        }
        None => RunConfig::default_for_dim(cli.dim.unwrap_or(2))?,
    };
    let overlay = PartialConfig {
        dim: cli.dim,
        n_max: cli.n_max,
        k_max: cli.k_max,
        replicas: cli.replicas,
        seed: cli.seed,
        suites: cli.suites.clone(),
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        tolerances: Default::default(),
    };
    cfg.apply(&overlay)?;
    Ok(cfg)
}

fn build_basis(cfg: &RunConfig) -> Result<Basis> {
    Basis::build(BasisSpec::new(cfg.dim, cfg.n_max, cfg.k_max)?)
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| {
        GffError::Config(format!(
            "cannot create output directory {}: {e}",
            cfg.out_dir.display()
        ))
    })
}

fn create_file(path: &Path) -> Result<BufWriter<fs::File>> {
    let f = fs::File::create(path)
        .map_err(|e| GffError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn stamp_header<W: Write>(cfg: &RunConfig, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# seed={}", cfg.seed)?;
    writeln!(w, "# truncation={}", cfg.truncation_label())?;
    writeln!(w, "# config_hash={:016x}", cfg.config_hash())
}

fn run_basis(cfg: &RunConfig) -> Result<i32> {
    let basis = build_basis(cfg)?;
    let report = audit(&basis)?;
    println!(
        "basis {} with {} modes",
        cfg.truncation_label(),
        basis.len()
    );
    println!("  angular gram deviation   {:.3e}", report.psi_gram_dev);
    println!("  volume gram deviation    {:.3e}", report.mode_gram_dev);
    println!("  eigen-equation residual  {:.3e}", report.max_eigen_residual);
    println!("  boundary residual        {:.3e}", report.max_boundary_residual);
    ensure_out_dir(cfg)?;
    let path = cfg.out_dir.join(format!("basis_manifest_d{}.csv", cfg.dim));
    let mut file = create_file(&path)?;
    stamp_header(cfg, &mut file)?;
    basis.write_manifest(&mut file)?;
    file.flush()?;
    println!("manifest written to {}", path.display());
    if report.passes() {
        println!("audit: PASS");
        Ok(0)
    } else {
        println!("audit: FAIL");
        Ok(2)
    }
}

fn run_verify(cfg: &RunConfig) -> Result<i32> {
    let basis = build_basis(cfg)?;
    let rows = suites::run_selected(cfg, &basis)?;
    ensure_out_dir(cfg)?;
    let json_path = cfg.out_dir.join(format!("verify_d{}.json", cfg.dim));
    let csv_path = cfg.out_dir.join(format!("verify_d{}.csv", cfg.dim));
    let mut json_file = create_file(&json_path)?;
    write_json(cfg, &rows, &mut json_file)?;
    json_file.flush()?;
    let mut csv_file = create_file(&csv_path)?;
    write_csv(cfg, &rows, &mut csv_file)?;
    csv_file.flush()?;

    let mut by_suite: Vec<(&str, usize, usize)> = Vec::new();
    for r in &rows {
        match by_suite.iter_mut().find(|(s, _, _)| *s == r.suite) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 += usize::from(r.passed());
            }
            None => by_suite.push((&r.suite, 1, usize::from(r.passed()))),
        }
    }
    for (suite, total, passed) in &by_suite {
        println!("{suite:14} {passed}/{total} passed");
    }
    let failures: Vec<&StatReport> = rows.iter().filter(|r| !r.passed()).collect();
    for f in &failures {
        println!(
            "FAIL {}/{}: estimate {:.6e}, reference {:.6e}, z {:+.3}{}",
            f.suite,
            f.test,
            f.estimate,
            f.reference,
            f.z,
            f.residual
                .map_or(String::new(), |v| format!(", residual {v:.3e}")),
        );
    }
    println!(
        "reports written to {} and {}",
        json_path.display(),
        csv_path.display()
    );
    if failures.is_empty() {
        println!("verify: PASS ({} rows)", rows.len());
        Ok(0)
    } else {
        println!("verify: FAIL ({} of {} rows)", failures.len(), rows.len());
        Ok(2)
    }
}

fn run_plotdata(cfg: &RunConfig) -> Result<i32> {
    ensure_out_dir(cfg)?;
    let dim = cfg.dim;

    // variance of the sphere average across radii: analytic curve plus a
    // Monte Carlo estimate from exact Gaussian draws of the radial profile
    let radii: Vec<f64> = (1..=19)
        .map(|k| k as f64 / 20.0)
        .chain([0.97, 0.99])
        .collect();
    let exact = ExactRadialSampler::new(dim, &radii, cfg.seed)?;
    let sweep = exact.sweep(0, cfg.replicas);
    let path = cfg.out_dir.join(format!("variance_profile_d{dim}.csv"));
    let mut file = create_file(&path)?;
    stamp_header(cfg, &mut file)?;
    writeln!(file, "r,analytic,mc_estimate,stderr")?;
    for (idx, &r) in radii.iter().enumerate() {
        let values: Vec<f64> = sweep.iter().map(|row| row[idx]).collect();
        let m = stats::moments(&values)?;
        let analytic = scaling_s(dim, r) - scaling_s(dim, 1.0);
        writeln!(
            file,
            "{r:.6},{analytic:.12e},{:.12e},{:.12e}",
            m.var, m.se_var
        )?;
    }
    file.flush()?;

    // kernel section along a diameter through a fixed source point; the
    // curve dives to zero at both boundary ends
    let x0 = {
        let mut p = vec![0.0; dim];
        p[0] = 0.3;
        p
    };
    let path = cfg.out_dir.join(format!("kernel_section_d{dim}.csv"));
    let mut file = create_file(&path)?;
    stamp_header(cfg, &mut file)?;
    writeln!(file, "t,green")?;
    for k in 0..=400 {
        let t = -1.0 + k as f64 / 200.0;
        // skip the singular sample at the source itself
        if (t - x0[0]).abs() < 5e-3 {
            continue;
        }
        let mut y = vec![0.0; dim];
        y[0] = t;
        let g = if t.abs() >= 1.0 {
            0.0
        } else {
            green_unit_ball(dim, &x0, &y)?
        };
        writeln!(file, "{t:.6},{g:.12e}")?;
    }
    file.flush()?;

    // two-point kernel against its size bound over a separation grid
    let path = cfg.out_dir.join(format!("bound_ratio_d{dim}.csv"));
    let mut file = create_file(&path)?;
    stamp_header(cfg, &mut file)?;
    writeln!(file, "separation,ratio")?;
    for k in 0..=60 {
        let sep = 10f64.powf(-3.0 + 3.0 * k as f64 / 60.0);
        let mut x = vec![0.0; dim];
        let mut y = vec![0.0; dim];
        x[0] = sep / 2.0;
        y[0] = -sep / 2.0;
        let ratio = green_unit_ball(dim, &x, &y)? / (1.0 + scaling_s(dim, sep));
        writeln!(file, "{sep:.6e},{ratio:.12e}")?;
    }
    file.flush()?;

    println!("plot data written to {}", cfg.out_dir.display());
    Ok(0)
}

/// Parse arguments, dispatch, and map errors onto exit codes.
pub fn main() -> i32 {
    if let Ok(workers) = std::env::var("GFF_LAB_WORKERS") {
        match workers.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: GFF_LAB_WORKERS must be a positive integer");
                return 1;
            }
        }
    }
    let cli = Cli::parse();
    let cfg = match assemble_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Basis => run_basis(&cfg),
        Command::Verify => run_verify(&cfg),
        Command::Plotdata => run_plotdata(&cfg),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
