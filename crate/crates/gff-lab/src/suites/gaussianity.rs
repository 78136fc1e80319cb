//! Joint Gaussianity of the field: excess kurtosis and distribution shape
//! across a probe battery, vanishing odd moments, the fourth-moment factor
//! of three, the pairwise Wick expansion of a four-point function, and
//! normality of random linear functionals built from sphere pairings.

use super::{col, point, SuiteCtx};
use crate::error::Result;
use crate::geom::Ball;
use crate::pairing::{green_pairing_quadrature, spectral_from_overlaps};
use crate::probe::Probe;
use crate::report::StatReport;
use crate::sampler::mc_sweep;
use crate::stats;

const SUITE: &str = "gaussianity";
const KS_LEVEL: f64 = 1e-3;

/// Linear functionals mixing sphere pairings across degree, component and
/// radius; coefficients fixed so runs are reproducible.
const COMBOS: [[(f64, usize, usize, f64); 3]; 10] = [
    [(1.0, 0, 1, 0.5), (0.8, 1, 1, 0.6), (-0.5, 2, 1, 0.7)],
    [(0.6, 0, 1, 0.3), (-1.1, 1, 2, 0.45), (0.4, 3, 1, 0.8)],
    [(1.3, 1, 1, 0.25), (0.7, 2, 2, 0.55), (0.2, 4, 1, 0.85)],
    [(-0.9, 0, 1, 0.75), (0.5, 3, 2, 0.5), (1.0, 1, 2, 0.9)],
    [(0.3, 2, 1, 0.35), (0.3, 2, 2, 0.65), (0.3, 1, 1, 0.95)],
    [(1.0, 4, 2, 0.6), (-0.6, 0, 1, 0.9), (0.8, 1, 1, 0.4)],
    [(0.45, 3, 1, 0.3), (1.2, 0, 1, 0.55), (-0.7, 2, 1, 0.8)],
    [(-1.4, 1, 2, 0.5), (0.9, 4, 1, 0.7), (0.25, 0, 1, 0.95)],
    [(0.8, 2, 2, 0.4), (0.8, 3, 1, 0.6), (-0.8, 4, 2, 0.75)],
    [(0.5, 1, 1, 0.35), (-0.5, 0, 1, 0.65), (1.1, 2, 1, 0.9)],
];

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let unit = Ball::unit(dim);
    let mut out = Vec::new();

    let battery: Vec<(&str, Probe)> = vec![
        ("bump_origin", Probe::bump(point(dim, 0.0, 0.0), 0.2)?),
        ("bump_offset", Probe::bump(point(dim, 0.4, 0.1), 0.1)?),
        ("annulus_mid", Probe::annulus(dim, 0.3, 0.5)?),
        ("sphere_mode", Probe::SphereHarmonic { n: 2, j: 1, r: 0.6 }),
        (
            "mixed_sum",
            Probe::Sum(vec![
                (1.2, Probe::bump(point(dim, 0.0, 0.0), 0.2)?),
                (-0.4, Probe::annulus(dim, 0.3, 0.5)?),
            ]),
        ),
    ];

    // quadruple of separated bumps for the four-point check
    let wick_probes: Vec<Probe> = [
        point(dim, 0.4, 0.0),
        point(dim, -0.4, 0.0),
        point(dim, 0.0, 0.4),
        point(dim, 0.0, -0.4),
    ]
    .into_iter()
    .map(|c| Probe::bump(c, 0.15))
    .collect::<Result<_>>()?;

    let combo_probes: Vec<Probe> = COMBOS
        .iter()
        .map(|terms| {
            Probe::Sum(
                terms
                    .iter()
                    .map(|&(a, n, j, r)| (a, Probe::SphereHarmonic { n, j, r }))
                    .collect(),
            )
        })
        .collect();

    let mut overlaps: Vec<Vec<f64>> = Vec::new();
    for (_, p) in &battery {
        overlaps.push(p.overlaps(ctx.basis)?);
    }
    for p in &wick_probes {
        overlaps.push(p.overlaps(ctx.basis)?);
    }
    for p in &combo_probes {
        overlaps.push(p.overlaps(ctx.basis)?);
    }
    let refs: Vec<&[f64]> = overlaps.iter().map(|v| v.as_slice()).collect();
    let rows = mc_sweep(&ctx.sampler(), ctx.lane(0), cfg.replicas, &refs);

    // eight z-gated moment rows share one threshold
    let gate = stats::z_gate(8);

    for (b, (name, _)) in battery.iter().enumerate() {
        let x = col(&rows, b);
        let m = stats::moments(&x)?;
        out.push(StatReport::statistical(
            SUITE,
            &format!("kurtosis_{name}"),
            "excess kurtosis of the probe pairing vanishes",
            m.kurtosis,
            (24.0 / m.n as f64).sqrt(),
            0.0,
            gate,
        ));
        let sigma = spectral_from_overlaps(ctx.basis, &overlaps[b], &overlaps[b]).sqrt();
        let (d, p) = stats::ks_test_normal(&x, 0.0, sigma)?;
        out.push(
            StatReport::from_pvalue(
                SUITE,
                &format!("ks_{name}"),
                "one-sample distribution distance to the centered normal law",
                d,
                p,
                KS_LEVEL,
            )
            .with_note(&format!("model sigma {sigma:.6e}")),
        );
    }

    // odd moment of the origin bump pairing
    let x0 = col(&rows, 0);
    let cubes: Vec<f64> = x0.iter().map(|v| v * v * v).collect();
    let mc = stats::moments(&cubes)?;
    out.push(StatReport::statistical(
        SUITE,
        "odd_third_moment",
        "third moment of a centered Gaussian pairing vanishes",
        mc.mean,
        mc.se_mean,
        0.0,
        gate,
    ));

    // fourth moment against three times the squared model variance
    let var0 = spectral_from_overlaps(ctx.basis, &overlaps[0], &overlaps[0]);
    let quads: Vec<f64> = x0.iter().map(|v| v.powi(4)).collect();
    let mq = stats::moments(&quads)?;
    out.push(StatReport::statistical(
        SUITE,
        "fourth_moment_factor",
        "fourth moment equals three times the squared variance",
        mq.mean,
        mq.se_mean,
        3.0 * var0 * var0,
        gate,
    ));

    // four-point function against the sum over pairings of two-point values
    let mut c = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            c[a][b] = green_pairing_quadrature(&unit, &wick_probes[a], &wick_probes[b])?;
        }
    }
    let wick_ref = c[0][1] * c[2][3] + c[0][2] * c[1][3] + c[0][3] * c[1][2];
    let mut tc = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            tc[a][b] = spectral_from_overlaps(ctx.basis, &overlaps[5 + a], &overlaps[5 + b]);
        }
    }
    let wick_model = tc[0][1] * tc[2][3] + tc[0][2] * tc[1][3] + tc[0][3] * tc[1][2];
    out.push(StatReport::deterministic(
        SUITE,
        "wick_model_alignment",
        "pairwise products under the mode truncation reproduce the kernel quadrature values",
        wick_model,
        wick_ref,
        0.05 * wick_ref.abs(),
    ));
    let products: Vec<f64> = rows
        .iter()
        .map(|row| row[5] * row[6] * row[7] * row[8])
        .collect();
    let mw = stats::moments(&products)?;
    out.push(
        StatReport::statistical(
            SUITE,
            "wick_four_point",
            "mean product over four separated bumps matches the pairwise expansion",
            mw.mean,
            mw.se_mean,
            wick_ref,
            3.0,
        )
        .with_note(&format!("truncated-model value {wick_model:.6e}")),
    );

    // random linear functionals of sphere pairings stay Gaussian
    for (k, ov) in overlaps.iter().enumerate().skip(9) {
        let x = col(&rows, k);
        let sigma = spectral_from_overlaps(ctx.basis, ov, ov).sqrt();
        let (d, p) = stats::ks_test_normal(&x, 0.0, sigma)?;
        out.push(
            StatReport::from_pvalue(
                SUITE,
                &format!("ks_linear_combo_{:02}", k - 9),
                "mixed-degree sphere pairing functional follows the centered normal law",
                d,
                p,
                KS_LEVEL,
            )
            .with_note(&format!("model sigma {sigma:.6e}")),
        );
    }

    Ok(out)
}
