//! Conformal-restriction fingerprint of harmonic data: for harmonic phi the
//! normalized sphere pairing r^{-n} nu_r(psi_{n,j}, phi) does not depend on
//! the radius. Checked across solid harmonics, fixed linear combinations and
//! truncated boundary-data extensions, with a non-harmonic control whose
//! drift is known in closed form.

use super::SuiteCtx;
use crate::error::Result;
use crate::harmonics::{multiplicity, nu_pair_values, solid_harmonic};
use crate::report::StatReport;
use crate::sphere::SphereRule;

const SUITE: &str = "constancy";
const RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.9];
const TOL: f64 = 1e-8;

/// Max over (n <= n_top, j) of the spread of r^{-n} nu_r across RADII.
fn battery_deviation(
    rule: &SphereRule,
    n_top: usize,
    phi: &dyn Fn(&[f64]) -> f64,
) -> Result<f64> {
    let dim = rule.dim;
    // one phi sweep per radius, shared by every (n, j) pairing
    let tables: Vec<Vec<f64>> = RADII
        .iter()
        .map(|&r| {
            rule.nodes
                .iter()
                .map(|u| {
                    let z: Vec<f64> = u.iter().map(|c| c * r).collect();
                    phi(&z)
                })
                .collect()
        })
        .collect();
    let mut worst = 0.0_f64;
    for n in 0..=n_top {
        for j in 1..=multiplicity(dim, n) {
            let vals: Vec<f64> = RADII
                .iter()
                .zip(&tables)
                .map(|(&r, table)| {
                    Ok(nu_pair_values(rule, n, j, table)? / r.powi(n as i32))
                })
                .collect::<Result<_>>()?;
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let dev = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let dim = ctx.cfg.dim;
    let rule = SphereRule::new(dim, 32)?;
    let n_top = 4usize;
    let mut out = Vec::new();

    // every harmonic polynomial of degree at most four
    let mut dev_solid = 0.0_f64;
    let mut count = 0;
    for m in 0..=4usize {
        for j in 1..=multiplicity(dim, m) {
            let phi = move |z: &[f64]| solid_harmonic(dim, m, j, z).unwrap();
            dev_solid = dev_solid.max(battery_deviation(&rule, n_top, &phi)?);
            count += 1;
        }
    }
    out.push(
        StatReport::deterministic(
            SUITE,
            "solid_harmonics",
            "normalized sphere pairings of harmonic polynomials are radius independent",
            dev_solid,
            0.0,
            TOL,
        )
        .with_note(&format!("{count} polynomials, degrees 0..4, radii {RADII:?}")),
    );

    // fixed mixtures across degrees
    let j2 = multiplicity(dim, 2).min(2);
    let j1_last = multiplicity(dim, 1);
    let combo_a = move |z: &[f64]| {
        2.0 + 0.7 * solid_harmonic(dim, 1, 1, z).unwrap()
            + 1.3 * solid_harmonic(dim, 2, j2, z).unwrap()
            - 0.4 * solid_harmonic(dim, 3, 1, z).unwrap()
    };
    let combo_b = move |z: &[f64]| {
        1.1 * solid_harmonic(dim, 4, 1, z).unwrap() - 0.6 * solid_harmonic(dim, 2, 1, z).unwrap()
            + 0.5 * solid_harmonic(dim, 1, j1_last, z).unwrap()
    };
    let dev_mix = battery_deviation(&rule, n_top, &combo_a)?
        .max(battery_deviation(&rule, n_top, &combo_b)?);
    out.push(StatReport::deterministic(
        SUITE,
        "harmonic_mixtures",
        "normalized sphere pairings of mixed-degree harmonic data are radius independent",
        dev_mix,
        0.0,
        TOL,
    ));

    // harmonic extensions of truncated boundary data b(theta) =
    // sum_m b_m psi_m: the extension multiplies each term by r^m
    let coeff_a: [f64; 9] = [0.5, 0.3, -0.2, 0.15, -0.1, 0.08, -0.05, 0.03, 0.02];
    let coeff_b: [f64; 9] = [-0.1, 0.6, 0.25, -0.3, 0.12, -0.07, 0.05, -0.02, 0.01];
    let ext = move |coeffs: [f64; 9], pick_second: bool| {
        move |z: &[f64]| {
            coeffs
                .iter()
                .enumerate()
                .map(|(m, &b)| {
                    let j = if pick_second { multiplicity(dim, m).min(2) } else { 1 };
                    b * solid_harmonic(dim, m, j, z).unwrap()
                })
                .sum::<f64>()
        }
    };
    let dev_ext = battery_deviation(&rule, n_top, &ext(coeff_a, false))?
        .max(battery_deviation(&rule, n_top, &ext(coeff_b, true))?);
    out.push(
        StatReport::deterministic(
            SUITE,
            "boundary_extensions",
            "harmonic extensions of degree-8 boundary data pair radius independently",
            dev_ext,
            0.0,
            TOL,
        )
        .with_note("extension of sum_m b_m psi_m carries r^m on each term"),
    );

    out.push(StatReport::deterministic(
        SUITE,
        "battery_summary",
        "worst radius dependence over the whole harmonic battery",
        dev_solid.max(dev_mix).max(dev_ext),
        0.0,
        TOL,
    ));

    // |z|^2 is not harmonic: its degree-0 pairing drifts as r^2, so the
    // detector must flag exactly the known spread around the grid mean
    let control = |z: &[f64]| z.iter().map(|c| c * c).sum::<f64>();
    let dev_control = battery_deviation(&rule, n_top, &control)?;
    let squares: Vec<f64> = RADII.iter().map(|r| r * r).collect();
    let mean_sq = squares.iter().sum::<f64>() / squares.len() as f64;
    let expected = squares
        .iter()
        .map(|v| (v - mean_sq).abs())
        .fold(0.0, f64::max);
    out.push(StatReport::deterministic(
        SUITE,
        "nonharmonic_control",
        "the radius drift of a non-harmonic control matches its closed form",
        dev_control,
        expected,
        1e-10,
    ));

    Ok(out)
}
