//! Dev harness: run suites at reduced replica counts and dump every row.

use gff_lab::basis::{Basis, BasisSpec};
use gff_lab::report::RunConfig;
use gff_lab::suites;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let dim: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(2);
    let replicas: u64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(20_000);
    let only: Option<&String> = args.get(3);

    let mut cfg = RunConfig::default_for_dim(dim).unwrap();
    cfg.replicas = replicas;
    let basis = Basis::build(BasisSpec::new(dim, cfg.n_max, cfg.k_max).unwrap()).unwrap();

    let names: Vec<&str> = match only {
        Some(n) => vec![n.as_str()],
        None => suites::suite_names(),
    };
    let mut failures = 0;
    for name in names {
        let t0 = std::time::Instant::now();
        match suites::run_suite(name, &cfg, &basis) {
            Ok(rows) => {
                println!("== {name} ({:.2?})", t0.elapsed());
                for r in rows {
                    if !r.passed() {
                        failures += 1;
                    }
                    println!(
                        "  [{}] {:32} est {:+.6e} ref {:+.6e} z {:+7.3} resid {} note: {}",
                        if r.passed() { "ok" } else { "FAIL" },
                        r.test,
                        r.estimate,
                        r.reference,
                        r.z,
                        r.residual.map_or("-".to_string(), |v| format!("{v:.3e}")),
                        r.note,
                    );
                }
            }
            Err(e) => {
                failures += 1;
                println!("== {name} ERROR: {e}");
            }
        }
    }
    println!("total failures: {failures}");
    std::process::exit(if failures > 0 { 1 } else { 0 });
}
