//! Size audit of the kernels: the two-point kernel is controlled by
//! 1 + s(separation) with a stable constant below one, it matches the free
//! singularity on the near diagonal, and the four-point kernel is exactly
//! the pairwise combination, so its growth exponent over near-boundary
//! quadruples fits to zero.

use super::{point, SuiteCtx};
use crate::error::Result;
use crate::geom::Ball;
use crate::kernels::{green_unit_ball, scaling_s, wick_g4};
use crate::report::StatReport;

const SUITE: &str = "bounds";

/// Largest value of k2 / (1 + s) over symmetric pairs at the given
/// separations.
fn fitted_constant(dim: usize, seps: &[f64]) -> Result<f64> {
    let mut c = 0.0_f64;
    for &sep in seps {
        let x = point(dim, sep / 2.0, 0.0);
        let y = point(dim, -sep / 2.0, 0.0);
        let g = green_unit_ball(dim, &x, &y)?;
        c = c.max(g / (1.0 + scaling_s(dim, sep)));
    }
    Ok(c)
}

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let dim = ctx.cfg.dim;
    let mut out = Vec::new();

    let coarse = [0.5, 0.3, 0.1, 0.03, 0.01, 1e-3];
    let fine = [0.5, 0.3, 0.2, 0.1, 0.05, 0.03, 0.01, 3e-3, 1e-3, 3e-4];
    let c_coarse = fitted_constant(dim, &coarse)?;
    let c_fine = fitted_constant(dim, &fine)?;
    out.push(
        StatReport::deterministic(
            SUITE,
            "pair_bound_constant_stable",
            "the fitted constant in k2 <= C (1 + s) is stable under grid refinement",
            c_coarse,
            c_fine,
            0.1 * c_fine,
        )
        .with_note(&format!("separations down to {:.0e}", fine[fine.len() - 1])),
    );
    out.push(StatReport::deterministic(
        SUITE,
        "pair_bound_constant_subunit",
        "the fitted constant stays below one for the s-normalized kernel",
        c_fine,
        0.0,
        1.0,
    ));

    // near the diagonal the kernel approaches the free singularity
    for (sep, tol, label) in [(1e-2, 0.05, "diagonal_match_coarse"), (1e-3, 0.005, "diagonal_match_fine")] {
        let x = point(dim, sep / 2.0, 0.0);
        let y = point(dim, -sep / 2.0, 0.0);
        let ratio = green_unit_ball(dim, &x, &y)? / scaling_s(dim, sep);
        out.push(StatReport::deterministic(
            SUITE,
            label,
            "two-point kernel over the free singularity tends to one on the diagonal",
            ratio,
            1.0,
            tol,
        ));
    }

    // four-point kernel over near-boundary quadruples: exactly the pairwise
    // combination, so the ratio is one and the fitted growth exponent is zero
    let unit = Ball::unit(dim);
    let deltas = [0.3, 0.1, 0.03];
    let mut logs = Vec::new();
    for &delta in &deltas {
        let rho = 1.0 - delta;
        let zs: Vec<Vec<f64>> = (0..4)
            .map(|k| {
                let ang = std::f64::consts::FRAC_PI_2 * k as f64;
                point(dim, rho * ang.cos(), rho * ang.sin())
            })
            .collect();
        let quad = [zs[0].as_slice(), zs[1].as_slice(), zs[2].as_slice(), zs[3].as_slice()];
        let k4 = wick_g4(&unit, &quad)?;
        let mut pairwise = 0.0;
        for (a, b, c, d) in [(0usize, 1usize, 2usize, 3usize), (0, 2, 1, 3), (0, 3, 1, 2)] {
            pairwise += green_unit_ball(dim, &zs[a], &zs[b])? * green_unit_ball(dim, &zs[c], &zs[d])?;
        }
        let ratio = k4 / pairwise;
        out.push(StatReport::deterministic(
            SUITE,
            &format!("quadruple_ratio_delta_{:03}", (delta * 100.0) as u32),
            "four-point kernel equals the sum over pairings of two-point products",
            ratio,
            1.0,
            1e-12,
        ));
        // adjacent separation on the quadruple sets the bound's size variable
        let sep = rho * std::f64::consts::SQRT_2;
        logs.push(((1.0 + scaling_s(dim, sep)).abs().ln(), ratio.ln()));
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let eta = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    out.push(
        StatReport::deterministic(
            SUITE,
            "quadruple_growth_exponent",
            "fitted exponent of the four-point ratio against the pair bound is zero",
            eta,
            0.0,
            1e-10,
        )
        .with_note("any exponent inside [0, 1) keeps the quadruple bound integrable"),
    );

    Ok(out)
}
