//! Radial behaviour of the field seen from the center: the circle-average
//! process has independent increments with the log-of-radius clock, its
//! near-boundary fourth moments carry the Gaussian factor of three and decay
//! at the square of the variance rate, and the weighted sphere-pairing
//! process decorrelates the same way.

use super::SuiteCtx;
use crate::error::Result;
use crate::kernels::scaling_s;
use crate::pairing::spectral_from_overlaps;
use crate::probe::Probe;
use crate::report::StatReport;
use crate::sampler::{mc_sweep, ExactRadialSampler};
use crate::stats;

const SUITE: &str = "radial";
const GATE: f64 = 3.0;
const KS_LEVEL: f64 = 1e-3;

// indices into GRID for the increment pairs checked for decorrelation
const GRID: [f64; 7] = [0.5, 0.7, 0.8, 0.9, 0.92, 0.96, 0.98];
const PAIRS: [((usize, usize), (usize, usize)); 4] =
    [((0, 1), (2, 3)), ((1, 2), (3, 4)), ((0, 2), (3, 6)), ((2, 3), (4, 5))];

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let mut out = Vec::new();

    let exact = ExactRadialSampler::new(dim, &GRID, cfg.seed)?;
    let sweep = exact.sweep(ctx.lane(0), cfg.replicas);
    let incr = |(a, b): (usize, usize)| -> Vec<f64> {
        sweep.iter().map(|row| row[b] - row[a]).collect()
    };

    let m4_gate = stats::z_gate(7);
    for (idx, (ia, ib)) in PAIRS.iter().enumerate() {
        let x = incr(*ia);
        let y = incr(*ib);
        let (cov, se) = stats::covariance(&x, &y)?;
        out.push(
            StatReport::statistical(
                SUITE,
                &format!("increment_decorrelation_{idx}"),
                "circle-average increments over disjoint radius intervals are uncorrelated",
                cov,
                se,
                0.0,
                GATE,
            )
            .with_note(&format!(
                "intervals ({}, {}) and ({}, {})",
                GRID[ia.0], GRID[ia.1], GRID[ib.0], GRID[ib.1]
            )),
        );
    }

    for (ia, ib, label) in [(0usize, 1usize, "ks_increment_wide"), (3, 6, "ks_increment_boundary")] {
        let x = incr((ia, ib));
        let sigma = (scaling_s(dim, GRID[ia]) - scaling_s(dim, GRID[ib])).sqrt();
        let (d, p) = stats::ks_test_normal(&x, 0.0, sigma)?;
        out.push(
            StatReport::from_pvalue(
                SUITE,
                label,
                "circle-average increment follows the centered normal law",
                d,
                p,
                KS_LEVEL,
            )
            .with_note(&format!(
                "interval ({}, {}), sigma {sigma:.6e}",
                GRID[ia], GRID[ib]
            )),
        );
    }

    // fourth moments of the circle average at distance delta from the
    // boundary; reference 3 (s(1 - delta) - s(1))^2, and the log-log slope
    // of the measured moments against delta sits near two
    let deltas = [0.02, 0.04, 0.08];
    let mut logs = Vec::new();
    for &delta in &deltas {
        let idx = GRID.iter().position(|&r| (r - (1.0 - delta)).abs() < 1e-12).unwrap();
        let quads: Vec<f64> = sweep.iter().map(|row| row[idx].powi(4)).collect();
        let m = stats::moments(&quads)?;
        let v = scaling_s(dim, 1.0 - delta) - scaling_s(dim, 1.0);
        out.push(StatReport::statistical(
            SUITE,
            &format!("fourth_moment_delta_{:03}", (delta * 1000.0) as u32),
            "near-boundary fourth moment carries the Gaussian factor of three",
            m.mean,
            m.se_mean,
            3.0 * v * v,
            m4_gate,
        ));
        logs.push((delta.ln(), m.mean.ln()));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let slope = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    out.push(StatReport::deterministic(
        SUITE,
        "fourth_moment_slope",
        "log-log slope of the near-boundary fourth moment against boundary distance is two",
        slope,
        2.0,
        0.2,
    ));

    // weighted sphere-pairing process: increments over disjoint radius
    // intervals decorrelate, judged against the truncation's own value
    let coeffs = [(1.0, 1usize, 1usize), (0.7, 2usize, 2usize)];
    let radii: [f64; 6] = [0.3, 0.5, 0.55, 0.7, 0.75, 0.85];
    let mut ovs: Vec<Vec<f64>> = Vec::new();
    for &r in &radii {
        let p = Probe::Sum(
            coeffs
                .iter()
                .map(|&(a, n, j)| {
                    (a * r.powi(-(n as i32)), Probe::SphereHarmonic { n, j, r })
                })
                .collect(),
        );
        ovs.push(p.overlaps(ctx.basis)?);
    }
    let refs: Vec<&[f64]> = ovs.iter().map(|v| v.as_slice()).collect();
    let rows = mc_sweep(&ctx.sampler(), ctx.lane(1), cfg.replicas, &refs);
    for (idx, ((a0, a1), (b0, b1))) in [((0usize, 1usize), (2usize, 3usize)), ((0, 1), (4, 5))]
        .into_iter()
        .enumerate()
    {
        let x: Vec<f64> = rows.iter().map(|row| row[a1] - row[a0]).collect();
        let y: Vec<f64> = rows.iter().map(|row| row[b1] - row[b0]).collect();
        let dx: Vec<f64> = ovs[a1].iter().zip(&ovs[a0]).map(|(p, q)| p - q).collect();
        let dy: Vec<f64> = ovs[b1].iter().zip(&ovs[b0]).map(|(p, q)| p - q).collect();
        let model_cov = spectral_from_overlaps(ctx.basis, &dx, &dy);
        let vx = spectral_from_overlaps(ctx.basis, &dx, &dx);
        let vy = spectral_from_overlaps(ctx.basis, &dy, &dy);
        let (cov, se) = stats::covariance(&x, &y)?;
        out.push(
            StatReport::statistical(
                SUITE,
                &format!("weighted_decorrelation_{idx}"),
                "weighted sphere-pairing increments over disjoint intervals are uncorrelated",
                cov,
                se,
                model_cov,
                GATE,
            )
            .with_note(&format!(
                "intervals ({}, {}) and ({}, {})",
                radii[a0], radii[a1], radii[b0], radii[b1]
            )),
        );
        out.push(StatReport::deterministic(
            SUITE,
            &format!("weighted_model_residual_{idx}"),
            "the truncation's own increment correlation is negligible",
            model_cov / (vx * vy).sqrt(),
            0.0,
            0.05,
        ));
    }

    Ok(out)
}
