//! Pairing covariance against the ball kernel: Monte Carlo covariances of
//! mollifier pairings are gated against deterministic double-quadrature
//! values, including a near-boundary pair and a near-diagonal separated
//! pair; support outside the domain and linearity are exact checks.

use super::{col, point, SuiteCtx};
use crate::error::Result;
use crate::geom::Ball;
use crate::pairing::{green_pairing_quadrature, spectral_from_overlaps};
use crate::probe::Probe;
use crate::report::StatReport;
use crate::sampler::mc_sweep;
use crate::stats;

const SUITE: &str = "covariance";
const GATE: f64 = 3.0;

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let ball = Ball::unit(dim);
    let s = ctx.sampler();

    let f_origin = Probe::bump(point(dim, 0.0, 0.0), 0.1)?;
    let f_offset = Probe::bump(point(dim, 0.5, 0.0), 0.1)?;
    let f_nearbd = Probe::bump(point(dim, 0.82, 0.0), 0.08)?;
    let f_far = Probe::bump(point(dim, 0.3, -0.4), 0.1)?;
    let f_diag_a = Probe::bump(point(dim, 0.2, 0.1), 0.08)?;
    let f_diag_b = Probe::bump(point(dim, 0.42, 0.1), 0.08)?;
    let f_same = Probe::bump(point(dim, -0.3, 0.2), 0.18)?;
    let f_center = Probe::bump(point(dim, 0.0, 0.0), 0.2)?;
    let f_outside = Probe::bump(point(dim, 1.5, 0.0), 0.2)?;
    let f_combo = Probe::Sum(vec![(1.5, f_origin.clone()), (-0.7, f_offset.clone())]);

    let probes = [
        &f_origin, &f_offset, &f_nearbd, &f_far, &f_diag_a, &f_diag_b, &f_same, &f_center,
        &f_outside, &f_combo,
    ];
    let ovs: Vec<Vec<f64>> = probes
        .iter()
        .map(|p| p.overlaps(ctx.basis))
        .collect::<Result<_>>()?;
    let ov_refs: Vec<&[f64]> = ovs.iter().map(|v| v.as_slice()).collect();
    let sweep = mc_sweep(&s, ctx.lane(0), cfg.replicas, &ov_refs);

    let mut out = Vec::new();
    // (test id, anchor, column a, column b or same, probes for the oracle)
    let pair_cases: [(&str, &str, usize, usize); 3] = [
        (
            "pair_origin_offset",
            "covariance of two disjoint bump pairings equals the kernel double integral",
            0,
            1,
        ),
        (
            "pair_near_boundary",
            "kernel covariance law holds for a bump close to the domain boundary",
            2,
            3,
        ),
        (
            "pair_near_diagonal",
            "kernel covariance law holds for nearby but separated bumps",
            4,
            5,
        ),
    ];
    let pair_probes: [(&Probe, &Probe); 3] = [
        (&f_origin, &f_offset),
        (&f_nearbd, &f_far),
        (&f_diag_a, &f_diag_b),
    ];
    let mut worst_align = 0.0_f64;
    for ((test, anchor, a, b), (pa, pb)) in pair_cases.iter().zip(pair_probes.iter()) {
        let reference = green_pairing_quadrature(&ball, pa, pb)?;
        let (est, se) = stats::covariance(&col(&sweep, *a), &col(&sweep, *b))?;
        let truncated = spectral_from_overlaps(ctx.basis, &ovs[*a], &ovs[*b]);
        worst_align = worst_align.max((truncated - reference).abs() / reference.abs());
        out.push(
            StatReport::statistical(SUITE, test, anchor, est, se, reference, GATE).with_note(
                &format!("quadrature oracle; truncated-model value {truncated:.6e}"),
            ),
        );
    }

    let var_cases: [(&str, &str, usize, &Probe); 2] = [
        (
            "variance_same_function",
            "pairing variance equals the kernel energy of the bump",
            6,
            &f_same,
        ),
        (
            "variance_centered",
            "pairing variance of a centered bump matches the rotationally reduced kernel integral",
            7,
            &f_center,
        ),
    ];
    for (test, anchor, idx, p) in var_cases {
        let reference = green_pairing_quadrature(&ball, p, p)?;
        let m = stats::moments(&col(&sweep, idx))?;
        let truncated = spectral_from_overlaps(ctx.basis, &ovs[idx], &ovs[idx]);
        worst_align = worst_align.max((truncated - reference).abs() / reference.abs());
        out.push(
            StatReport::statistical(SUITE, test, anchor, m.var, m.se_var, reference, GATE)
                .with_note(&format!(
                    "quadrature oracle; truncated-model value {truncated:.6e}"
                )),
        );
    }

    // the gated rows above only make sense if the truncation sits well under
    // the Monte Carlo resolution for every battery member
    out.push(StatReport::deterministic(
        SUITE,
        "battery_model_alignment",
        "truncated-model values of the battery match the kernel quadrature",
        worst_align,
        0.0,
        5e-3,
    ));

    // support outside the domain pairs to exactly zero, replica by replica
    let worst_outside = col(&sweep, 8)
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    out.push(StatReport::deterministic(
        SUITE,
        "support_outside_domain",
        "a bump supported outside the ball has exactly zero pairing",
        worst_outside,
        0.0,
        0.0,
    ));

    // linearity of the pairing, replica by replica
    let (c0, c1, cc) = (col(&sweep, 0), col(&sweep, 1), col(&sweep, 9));
    let mut worst_lin = 0.0_f64;
    for i in 0..cc.len() {
        worst_lin = worst_lin.max((cc[i] - (1.5 * c0[i] - 0.7 * c1[i])).abs());
    }
    out.push(StatReport::deterministic(
        SUITE,
        "linearity",
        "pairings are linear in the test function for every replica",
        worst_lin,
        0.0,
        1e-12,
    ));

    Ok(out)
}
