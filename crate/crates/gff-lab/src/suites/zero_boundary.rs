//! Vanishing of the field at the domain boundary, seen three ways: the
//! analytic variance of circle averages decays to zero, sampled circle
//! averages match that decay, and the kernel energy of thin annuli hugging
//! the boundary collapses geometrically.

use super::SuiteCtx;
use crate::error::Result;
use crate::geom::Ball;
use crate::kernels;
use crate::pairing::green_pairing_quadrature;
use crate::probe::Probe;
use crate::report::StatReport;
use crate::sampler::ExactRadialSampler;
use crate::stats;

const SUITE: &str = "zeroboundary";
const GATE: f64 = 3.0;

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let radii = [0.5, 0.9, 0.99, 0.999];
    let analytic: Vec<f64> = radii
        .iter()
        .map(|&r| kernels::scaling_s(dim, r) - kernels::scaling_s(dim, 1.0))
        .collect();
    let mut out = Vec::new();

    let mut worst_increase = 0.0_f64;
    for w in analytic.windows(2) {
        worst_increase = worst_increase.max(w[1] - w[0]);
    }
    out.push(
        StatReport::deterministic(
            SUITE,
            "variance_monotone",
            "circle-average variance decreases as the radius approaches the boundary",
            worst_increase,
            0.0,
            0.0,
        )
        .with_note(&format!(
            "Var at r = {:?} is {:?}",
            radii,
            analytic.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>()
        )),
    );
    out.push(StatReport::deterministic(
        SUITE,
        "variance_decay",
        "circle-average variance at r = 0.999 is under 2 percent of its value at r = 0.5",
        analytic[3] / analytic[0],
        0.0,
        0.02,
    ));

    // sampled circle averages: exact Gaussian draws of the radial profile
    // are cheap, so take four times the configured replica budget
    let exact = ExactRadialSampler::new(dim, &radii, cfg.seed)?;
    let n_exact = 4 * cfg.replicas;
    let sweep = exact.sweep(ctx.lane(0), n_exact);
    for (idx, label) in [(1usize, "sampled_var_09"), (2, "sampled_var_099"), (3, "sampled_var_0999")] {
        let values: Vec<f64> = sweep.iter().map(|row| row[idx]).collect();
        let m = stats::moments(&values)?;
        out.push(
            StatReport::statistical(
                SUITE,
                label,
                &format!(
                    "variance of the circle average at r = {} matches the boundary-flattened kernel",
                    radii[idx]
                ),
                m.var,
                m.se_var,
                analytic[idx],
                GATE,
            )
            .with_replicas(n_exact),
        );
    }

    // kernel energy of dyadic annuli hugging the boundary
    let unit = Ball::unit(dim);
    let mut energies = Vec::new();
    for n in 1..=8u32 {
        let lo = 1.0 - 0.5_f64.powi(n as i32);
        let hi = 1.0 - 0.5_f64.powi(n as i32 + 1);
        let f = Probe::annulus(dim, lo, hi)?;
        energies.push(green_pairing_quadrature(&unit, &f, &f)?);
    }
    let mut worst_step = 0.0_f64;
    for w in energies.windows(2) {
        worst_step = worst_step.max(w[1] - w[0]);
    }
    let note = format!(
        "energies for dyadic shells n = 1..8: {:?}",
        energies.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
    );
    out.push(
        StatReport::deterministic(
            SUITE,
            "annular_energy_decreasing",
            "kernel energy of unit-mass dyadic boundary shells strictly decreases",
            worst_step,
            0.0,
            0.0,
        )
        .with_note(&note),
    );
    out.push(StatReport::deterministic(
        SUITE,
        "annular_energy_decay",
        "kernel energy of the n = 8 shell is under 1 percent of the n = 1 shell",
        energies[7] / energies[0],
        0.0,
        1e-2,
    ));

    Ok(out)
}
