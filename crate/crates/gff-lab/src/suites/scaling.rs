//! Scaling covariance of the field under ball dilation: the kernel identity
//! is checked by deterministic quadrature, and the law-level exponent by an
//! independent two-sample variance ratio between a field realized on the
//! mapped ball and the unit-ball field.

use super::{col, point, SuiteCtx};
use crate::error::Result;
use crate::geom::Ball;
use crate::pairing::green_pairing_quadrature;
use crate::probe::Probe;
use crate::report::StatReport;
use crate::sampler::mc_sweep;
use crate::stats;

const SUITE: &str = "scaling";
const GATE: f64 = 3.0;

pub fn run(ctx: &SuiteCtx) -> Result<Vec<StatReport>> {
    let cfg = ctx.cfg;
    let dim = cfg.dim;
    let unit = Ball::unit(dim);
    let mut out = Vec::new();

    // unit-ball reference probe and energy
    let c0 = point(dim, 0.1, -0.2);
    let eps = 0.15;
    let f_unit = Probe::bump(c0.clone(), eps)?;
    let q_unit = green_pairing_quadrature(&unit, &f_unit, &f_unit)?;

    // kernel identity at r = 1, a = 0: mapping is the identity
    let q_same = green_pairing_quadrature(&Ball::new(vec![0.0; dim], 1.0)?, &f_unit, &f_unit)?;
    out.push(StatReport::deterministic(
        SUITE,
        "identity_map",
        "dilation by r = 1 about the origin leaves the kernel energy unchanged",
        q_same,
        q_unit,
        1e-12 * q_unit,
    ));

    // kernel identity at r = 0.5 shifted: composed test function on the
    // mapped ball carries the volume factor r^d, so the energies compare as
    // r^{2d} (mapped, unit-mass) vs r^{2+d} (unit)
    let r = 0.5;
    let a = point(dim, 0.2, 0.1);
    let mapped_ball = Ball::new(a.clone(), r)?;
    let mapped_center: Vec<f64> = a.iter().zip(&c0).map(|(ai, ci)| ai + r * ci).collect();
    let f_mapped = Probe::bump(mapped_center, r * eps)?;
    let q_mapped = green_pairing_quadrature(&mapped_ball, &f_mapped, &f_mapped)?;
    let lhs = r.powi(2 * dim as i32) * q_mapped;
    let rhs = r.powi(2 + dim as i32) * q_unit;
    out.push(StatReport::deterministic(
        SUITE,
        "kernel_identity_halved",
        "kernel energy of the composed test function on the shifted half-size ball scales by r^(2+d)",
        lhs,
        rhs,
        1e-10 * rhs,
    ));

    // law-level exponent: independent samples of the mapped-ball pairing
    // (eigenvalues scale by 1/r^2, normalized modes by r^(-d/2)) against the
    // unit-ball pairing; compare log variances
    let s = ctx.sampler();
    let ov_unit = f_unit.overlaps(ctx.basis)?;
    for (row_id, radius) in [("variance_ratio_half", 0.5_f64), ("variance_ratio_08", 0.8)] {
        let factor = radius.powf(1.0 + dim as f64 / 2.0);
        let ov_mapped: Vec<f64> = ov_unit.iter().map(|v| factor * v).collect();
        let lane_a = ctx.lane(if radius == 0.5 { 0 } else { 2 });
        let lane_b = ctx.lane(if radius == 0.5 { 1 } else { 3 });
        let unit_rows = mc_sweep(&s, lane_a, cfg.replicas, &[&ov_unit]);
        let mapped_rows = mc_sweep(&s, lane_b, cfg.replicas, &[&ov_mapped]);
        let mu = stats::moments(&col(&unit_rows, 0))?;
        let mm = stats::moments(&col(&mapped_rows, 0))?;
        let n = cfg.replicas as f64;
        let est = (mm.var / mu.var).ln();
        let reference = (2.0 + dim as f64) * radius.ln();
        let se = (4.0 / n).sqrt();
        out.push(
            StatReport::statistical(
                SUITE,
                row_id,
                "log variance ratio between the mapped-ball field and the unit field equals (2+d) log r",
                est,
                se,
                reference,
                GATE,
            )
            .with_note(&format!("r = {radius}, independent replica streams")),
        );
    }

    Ok(out)
}
