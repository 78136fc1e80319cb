//! Walk-on-spheres exit law: from the center of a carved sphere the exits
//! land uniformly, from an off-center start they follow the boundary kernel
//! of the viewpoint, containment sends every walk through the inner face,
//! and a mirror-symmetric lens splits its exits evenly across the mirror.

use super::{point, SuiteCtx};
use crate::error::Result;
use crate::geom::Ball;
use crate::report::StatReport;
use crate::stats;
use crate::wos::{wos_harmonic_measure, ExitBins, ExitFace};

const SUITE: &str = "wos";
const GATE: f64 = 3.0;

/// Worst per-bin z-score of observed counts against a multinomial law.
fn worst_bin_z(counts: &[u64], probs: &[f64], n: u64) -> f64 {
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let se = (n as f64 * p * (1.0 - p)).sqrt();
            ((c as f64 - n as f64 * p) / se).abs()
        })
        .fold(0.0, f64::max)
}

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let seed = cfg.seed.wrapping_add(0x77_05);
    let mut out = Vec::new();

    // carved ball strictly inside the outer one: every walk exits inward
    let outer = Ball::new(point(dim, 0.1, 0.0), 0.8)?;
    let carved = Ball::new(point(dim, 0.1, 0.05), 0.3)?;
    let rec = wos_harmonic_measure(&point(dim, 0.1, 0.05), &outer, &carved, 2000, seed)?;
    out.push(
        StatReport::deterministic(
            SUITE,
            "containment_exit_face",
            "with the carved ball inside the outer one, every walk exits the carved face",
            rec.carved_hits as f64 / rec.n_walks as f64,
            1.0,
            0.0,
        )
        .with_note(&format!("{} walks, mean steps {:.1}", rec.n_walks, rec.mean_steps)),
    );

    // from the carved center the exit law is uniform on the sphere
    let unit = Ball::unit(dim);
    let carved_c = Ball::new(vec![0.0; dim], 0.6)?;
    let origin = vec![0.0; dim];
    let rec = wos_harmonic_measure(&origin, &unit, &carved_c, cfg.replicas, seed + 1)?;
    let bins = ExitBins::new(&carved_c, &origin, 16)?;
    let counts = rec.bin_counts(&bins, ExitFace::Carved);
    let probs = bins.uniform_probs();
    out.push(StatReport::statistical(
        SUITE,
        "center_uniform_worst_bin",
        "worst per-bin deviation of centered exits from the uniform law",
        worst_bin_z(&counts, &probs, rec.carved_hits),
        1.0,
        0.0,
        GATE,
    ));
    let observed: Vec<u64> = counts.clone();
    let (stat, dof, p) = stats::chi_square_counts(&observed, &probs)?;
    out.push(
        StatReport::from_pvalue(
            SUITE,
            "center_uniform_chisq",
            "centered exit counts are multinomial-uniform across sectors",
            stat,
            p,
            0.01,
        )
        .with_note(&format!("{dof} degrees of freedom")),
    );

    // from an off-center start the exit law is the boundary kernel at the
    // viewpoint
    let z = point(dim, 0.3, 0.1);
    let carved_p = Ball::new(vec![0.0; dim], 0.7)?;
    let rec = wos_harmonic_measure(&z, &unit, &carved_p, cfg.replicas, seed + 2)?;
    let bins = ExitBins::new(&carved_p, &z, 12)?;
    let counts = rec.bin_counts(&bins, ExitFace::Carved);
    let probs = bins.poisson_probs();
    out.push(
        StatReport::statistical(
            SUITE,
            "viewpoint_kernel_worst_bin",
            "worst per-bin deviation of off-center exits from the boundary kernel",
            worst_bin_z(&counts, &probs, rec.carved_hits),
            1.0,
            0.0,
            GATE,
        )
        .with_note(&format!("viewpoint at radius {:.3}", crate::geom::norm(&z))),
    );
    let (stat, dof, p) = stats::chi_square_counts(&counts, &probs)?;
    out.push(
        StatReport::from_pvalue(
            SUITE,
            "viewpoint_kernel_chisq",
            "off-center exit counts follow the boundary kernel across sectors",
            stat,
            p,
            0.01,
        )
        .with_note(&format!("{dof} degrees of freedom")),
    );

    // two overlapping balls make a lens with a mirror symmetry across the
    // axis through both centers; exits split evenly across that mirror
    let left = Ball::new(point(dim, 0.0, 0.0), 0.8)?;
    let right = Ball::new(point(dim, 0.7, 0.0), 0.5)?;
    let start = point(dim, 0.45, 0.0);
    let n_lens = 20_000u64;
    let rec = wos_harmonic_measure(&start, &left, &right, n_lens, seed + 3)?;
    let upper = rec
        .exits
        .iter()
        .filter(|e| e.point[1] > 0.0)
        .count() as f64;
    let frac = upper / rec.n_walks as f64;
    out.push(StatReport::statistical(
        SUITE,
        "lens_mirror_symmetry",
        "exits from a lens region split evenly across the mirror plane",
        frac,
        (0.25 / rec.n_walks as f64).sqrt(),
        0.5,
        GATE,
    ));

    Ok(out)
}
