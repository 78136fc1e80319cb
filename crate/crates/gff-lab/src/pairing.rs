//! The bilinear energy pairing (f, g) -> double integral of
//! f(x) G(x, y) g(y) over a ball, through two independent routes: a spectral
//! sum over the eigenbasis and direct quadrature.
//!
//! The quadrature route leans on two exact reductions. The average of
//! s(|x - y|) over a sphere around either point depends only on the larger
//! radius (the classic shell identity), which removes the singularity for
//! probes sharing a center. For probes centered at the ball center the full
//! angular average of G has the closed form scale * (s(u1 v u2) - s(1)) in
//! unit radii, so only radial quadrature remains.

use crate::basis::Basis;
use crate::error::{argument, geometry, Result};
use crate::geom::{dist, sphere_area, Ball};
use crate::kernels::{green_ball, green_regularized, scaling_s};
use crate::probe::Probe;
use crate::quad::gauss_legendre_on;
use crate::sphere::SphereRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingMethod {
    Spectral,
    Quadrature,
}

/// Spectral value from precomputed overlap vectors:
/// kappa * sum of lambda^{-1} a_k b_k, kappa the kernel normalization.
pub fn spectral_from_overlaps(basis: &Basis, a: &[f64], b: &[f64]) -> f64 {
    let raw: f64 = basis
        .modes
        .iter()
        .zip(a.iter().zip(b))
        .map(|(m, (&x, &y))| x * y / m.lambda)
        .sum();
    crate::kernels::green_normalization(basis.spec.dim) * raw
}

/// Spectral pairing over the truncated eigenbasis of the unit ball.
pub fn green_pairing_spectral(basis: &Basis, f: &Probe, g: &Probe) -> Result<f64> {
    let of = f.overlaps(basis)?;
    let og = g.overlaps(basis)?;
    Ok(spectral_from_overlaps(basis, &of, &og))
}

/// A rotationally symmetric density seen as a function of the distance to
/// its center: the shape shared by bump and annulus probes.
struct RadialView<'a> {
    center: Vec<f64>,
    lo: f64,
    hi: f64,
    dens: Box<dyn Fn(f64) -> f64 + 'a>,
}

fn radial_view(p: &Probe) -> Result<RadialView<'_>> {
    match p {
        Probe::Bump(m) => Ok(RadialView {
            center: m.center.clone(),
            lo: 0.0,
            hi: m.eps,
            dens: Box::new(move |rho| m.radial_density(rho)),
        }),
        Probe::Annulus(a) => Ok(RadialView {
            center: vec![0.0; a.dim],
            lo: a.lo,
            hi: a.hi,
            dens: Box::new(move |rho| a.radial_density(rho)),
        }),
        _ => argument(
            "quadrature pairing handles bump and annulus probes; use the spectral route"
                .to_string(),
        ),
    }
}

/// Quadrature pairing. Supports probes sharing a center and probes with
/// disjoint supports; overlapping distinct-center supports are rejected.
pub fn green_pairing_quadrature(ball: &Ball, f: &Probe, g: &Probe) -> Result<f64> {
    let dim = ball.dim();
    let vf = radial_view(f)?;
    let vg = radial_view(g)?;
    for v in [&vf, &vg] {
        if dist(&v.center, &ball.center) + v.hi >= ball.radius * (1.0 - 1e-12) {
            return geometry("probe support leaks outside the ball".to_string());
        }
    }
    let cdist = dist(&vf.center, &vg.center);
    if cdist < 1e-14 {
        if dist(&vf.center, &ball.center) < 1e-14 {
            return Ok(concentric_pairing(ball, dim, &vf, &vg));
        }
        return Ok(shared_center_pairing(ball, dim, &vf, &vg));
    }
    if cdist < vf.hi + vg.hi + 1e-12 {
        return argument(
            "overlapping supports with distinct centers are not handled by quadrature"
                .to_string(),
        );
    }
    disjoint_pairing(ball, dim, &vf, &vg)
}

/// Angular-exact reduction for probes centered at the ball center: the
/// direction-averaged Green's function is scale * (s(max(u1,u2)) - s(1)) in
/// unit radii, so the pairing is a 2-d radial integral with a kink on the
/// diagonal, split into triangles.
fn concentric_pairing(ball: &Ball, dim: usize, vf: &RadialView, vg: &RadialView) -> f64 {
    let area = sphere_area(dim);
    let scale = if dim == 2 {
        1.0
    } else {
        ball.radius.powi(2 - dim as i32)
    };
    let s1 = scaling_s(dim, 1.0);
    let kernel = |r1: f64, r2: f64| {
        scale * (scaling_s(dim, r1.max(r2) / ball.radius) - s1)
    };
    triangle_double_radial(dim, vf, vg, kernel) * area * area
}

/// Shared off-center point: exact shell identity for the s(|x - y|) part,
/// smooth double product rule for the remainder of G.
fn shared_center_pairing(ball: &Ball, dim: usize, vf: &RadialView, vg: &RadialView) -> f64 {
    let area = sphere_area(dim);
    // the ball-adapted singular factor: green_ball = scale * s(|x-y|/r) + reg
    let scale = if dim == 2 {
        1.0
    } else {
        ball.radius.powi(2 - dim as i32)
    };
    let s_kernel =
        |r1: f64, r2: f64| scale * scaling_s(dim, r1.max(r2) / ball.radius);
    let s_part = triangle_double_radial(dim, vf, vg, s_kernel) * area * area;

    let rule = SphereRule::new(dim, 20).unwrap();
    let (r1s, w1s) = gauss_legendre_on(vf.lo, vf.hi, 20);
    let (r2s, w2s) = gauss_legendre_on(vg.lo, vg.hi, 20);
    let mut reg_part = 0.0;
    for (&r1, &w1) in r1s.iter().zip(&w1s) {
        for (&r2, &w2) in r2s.iter().zip(&w2s) {
            let mut shell = 0.0;
            for (u1, &wu1) in rule.nodes.iter().zip(&rule.weights) {
                let x: Vec<f64> = vf.center.iter().zip(u1).map(|(c, u)| c + r1 * u).collect();
                for (u2, &wu2) in rule.nodes.iter().zip(&rule.weights) {
                    let y: Vec<f64> =
                        vg.center.iter().zip(u2).map(|(c, u)| c + r2 * u).collect();
                    shell += wu1 * wu2 * green_regularized(ball, &x, &y).unwrap();
                }
            }
            reg_part += w1 * w2 * (vf.dens)(r1) * (vg.dens)(r2) * shell
                * area * area
                * (r1 * r2).powi(dim as i32 - 1);
        }
    }
    s_part + reg_part
}

/// Disjoint supports: the kernel is smooth across the product region, so a
/// plain double product rule applies.
fn disjoint_pairing(ball: &Ball, dim: usize, vf: &RadialView, vg: &RadialView) -> Result<f64> {
    let area = sphere_area(dim);
    let rule = SphereRule::new(dim, 16)?;
    let (r1s, w1s) = gauss_legendre_on(vf.lo, vf.hi, 16);
    let (r2s, w2s) = gauss_legendre_on(vg.lo, vg.hi, 16);
    let mut acc = 0.0;
    for (&r1, &w1) in r1s.iter().zip(&w1s) {
        let d1 = (vf.dens)(r1) * r1.powi(dim as i32 - 1);
        for (u1, &wu1) in rule.nodes.iter().zip(&rule.weights) {
            let x: Vec<f64> = vf.center.iter().zip(u1).map(|(c, u)| c + r1 * u).collect();
            for (&r2, &w2) in r2s.iter().zip(&w2s) {
                let d2 = (vg.dens)(r2) * r2.powi(dim as i32 - 1);
                for (u2, &wu2) in rule.nodes.iter().zip(&rule.weights) {
                    let y: Vec<f64> =
                        vg.center.iter().zip(u2).map(|(c, u)| c + r2 * u).collect();
                    acc += w1 * wu1 * w2 * wu2 * d1 * d2 * green_ball(ball, &x, &y)?;
                }
            }
        }
    }
    Ok(acc * area * area)
}

/// Double radial integral of dens_f(r1) r1^{d-1} dens_g(r2) r2^{d-1}
/// kernel(r1, r2) where the kernel is smooth except for a kink at r1 = r2.
fn triangle_double_radial(
    dim: usize,
    vf: &RadialView,
    vg: &RadialView,
    kernel: impl Fn(f64, f64) -> f64,
) -> f64 {
    let n = 48;
    let (r2s, w2s) = gauss_legendre_on(vg.lo, vg.hi, n);
    let mut acc = 0.0;
    for (&r2, &w2) in r2s.iter().zip(&w2s) {
        let outer = (vg.dens)(r2) * r2.powi(dim as i32 - 1) * w2;
        // inner segment below the kink
        let split = r2.clamp(vf.lo, vf.hi);
        for (a, b) in [(vf.lo, split), (split, vf.hi)] {
            if b - a < 1e-300 {
                continue;
            }
            let (r1s, w1s) = gauss_legendre_on(a, b, n);
            for (&r1, &w1) in r1s.iter().zip(&w1s) {
                acc += outer * w1 * (vf.dens)(r1) * r1.powi(dim as i32 - 1) * kernel(r1, r2);
            }
        }
    }
    acc
}

/// Average of G over two concentric spheres of the unit ball, by 1-d polar
/// quadrature. The s(|x - y|) part is replaced by its exact shell value;
/// the image part is smooth and integrated numerically. Serves as an
/// independent oracle for spherical-average covariances.
pub fn sphere_avg_green(dim: usize, r1: f64, r2: f64) -> Result<f64> {
    if !(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0) {
        return argument(format!("radii ({r1}, {r2}) must lie in (0, 1)"));
    }
    let s_part = scaling_s(dim, r1.max(r2));
    let refl = |g: f64| (r1 * r1 * r2 * r2 - 2.0 * r1 * r2 * g.cos() + 1.0).sqrt();
    let (gs, ws) = gauss_legendre_on(0.0, std::f64::consts::PI, 240);
    let mut img = 0.0;
    for (&g, &w) in gs.iter().zip(&ws) {
        let weight = match dim {
            2 => 1.0 / std::f64::consts::PI,
            3 => 0.5 * g.sin(),
            _ => return argument("sphere averages implemented for dimensions 2 and 3".to_string()),
        };
        img += w * weight * (-scaling_s(dim, refl(g)));
    }
    Ok(s_part + img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisSpec;

    #[test]
    fn sphere_avg_green_matches_closed_form() {
        // harmonicity of the image part forces s(max) - s(1)
        for dim in [2usize, 3] {
            let s1 = scaling_s(dim, 1.0);
            for (r1, r2) in [(0.5, 0.5), (0.3, 0.6), (0.9, 0.2), (0.85, 0.85)] {
                let got = sphere_avg_green(dim, r1, r2).unwrap();
                let want = scaling_s(dim, r1.max(r2)) - s1;
                assert!(
                    (got - want).abs() < 1e-12,
                    "dim {dim} ({r1},{r2}): {got:.15e} vs {want:.15e}"
                );
            }
        }
    }

    #[test]
    fn spectral_matches_radial_quadrature_for_centered_bump() {
        for dim in [2usize, 3] {
            let basis = crate::basis::default_basis(dim).unwrap();
            let f = Probe::bump(vec![0.0; dim], 0.2).unwrap();
            let spectral = green_pairing_spectral(&basis, &f, &f).unwrap();
            let quad =
                green_pairing_quadrature(&Ball::unit(dim), &f, &f).unwrap();
            assert!(
                (spectral - quad).abs() < 1e-3 * quad.abs(),
                "dim {dim}: spectral {spectral:.8e} vs quadrature {quad:.8e}"
            );
        }
    }

    #[test]
    fn spectral_matches_disjoint_quadrature() {
        let basis = crate::basis::default_basis(2).unwrap();
        let f = Probe::bump(vec![0.35, 0.0], 0.1).unwrap();
        let g = Probe::bump(vec![-0.2, 0.15], 0.12).unwrap();
        let spectral = green_pairing_spectral(&basis, &f, &g).unwrap();
        let quad = green_pairing_quadrature(&Ball::unit(2), &f, &g).unwrap();
        assert!(
            (spectral - quad).abs() < 1e-3 * quad.abs(),
            "spectral {spectral:.8e} vs quadrature {quad:.8e}"
        );
    }

    #[test]
    fn annulus_pairing_against_double_sphere_reduction() {
        // independent construction: annuli are radial, so the pairing is the
        // weighted average of sphere_avg_green over the two radial densities
        for dim in [2usize, 3] {
            let a1 = Probe::annulus(dim, 0.2, 0.3).unwrap();
            let a2 = Probe::annulus(dim, 0.5, 0.62).unwrap();
            let quad = green_pairing_quadrature(&Ball::unit(dim), &a1, &a2).unwrap();
            let (v1, v2) = match (&a1, &a2) {
                (Probe::Annulus(x), Probe::Annulus(y)) => (x.clone(), y.clone()),
                _ => unreachable!(),
            };
            let area = sphere_area(dim);
            let (r1s, w1s) = gauss_legendre_on(v1.lo, v1.hi, 60);
            let (r2s, w2s) = gauss_legendre_on(v2.lo, v2.hi, 60);
            let mut want = 0.0;
            for (&r1, &w1) in r1s.iter().zip(&w1s) {
                for (&r2, &w2) in r2s.iter().zip(&w2s) {
                    want += w1 * w2
                        * v1.radial_density(r1) * r1.powi(dim as i32 - 1)
                        * v2.radial_density(r2) * r2.powi(dim as i32 - 1)
                        * sphere_avg_green(dim, r1, r2).unwrap();
                }
            }
            want *= area * area;
            assert!(
                (quad - want).abs() < 1e-9 * want.abs().max(1.0),
                "dim {dim}: {quad:.10e} vs {want:.10e}"
            );
        }
    }

    #[test]
    fn bilinearity_and_positivity() {
        let basis = Basis::build(BasisSpec::new(2, 8, 10).unwrap()).unwrap();
        let f = Probe::bump(vec![0.3, 0.0], 0.1).unwrap();
        let g = Probe::bump(vec![-0.3, 0.1], 0.1).unwrap();
        let fg = green_pairing_spectral(&basis, &f, &g).unwrap();
        let scaled = green_pairing_spectral(&basis, &Probe::scaled(2.5, f.clone()), &g).unwrap();
        assert!((scaled - 2.5 * fg).abs() < 1e-12 * fg.abs());
        assert!(green_pairing_spectral(&basis, &f, &f).unwrap() > 0.0);
        assert!(green_pairing_spectral(&basis, &g, &g).unwrap() > 0.0);
        // symmetric in its arguments
        let gf = green_pairing_spectral(&basis, &g, &f).unwrap();
        assert!((fg - gf).abs() < 1e-15);
    }

    #[test]
    fn quadrature_scaling_covariance() {
        // pairing of unit-mass bumps transforms with r^{2-d} under domain
        // scaling; the full squared-pairing identity carries the r^{2d} mass
        // factor on top
        for dim in [2usize, 3] {
            let r = 0.5;
            let a = {
                let mut c = vec![0.0; dim];
                c[0] = 0.2;
                c[1] = 0.1;
                c
            };
            let c0 = {
                let mut c = vec![0.0; dim];
                c[0] = 0.3;
                c
            };
            let eps = 0.15;
            let m0 = Probe::bump(c0.clone(), eps).unwrap();
            let unit_val = green_pairing_quadrature(&Ball::unit(dim), &m0, &m0).unwrap();
            let mapped_center: Vec<f64> = a.iter().zip(&c0).map(|(ai, ci)| ai + r * ci).collect();
            let m1 = Probe::bump(mapped_center, r * eps).unwrap();
            let ball = Ball::new(a, r).unwrap();
            let mapped_val = green_pairing_quadrature(&ball, &m1, &m1).unwrap();
            let want = r.powi(2 - dim as i32) * unit_val;
            assert!(
                (mapped_val - want).abs() < 1e-10 * want.abs(),
                "dim {dim}: {mapped_val:.12e} vs {want:.12e}"
            );
        }
    }

    #[test]
    fn rejects_leaky_and_overlapping_supports() {
        let unit = Ball::unit(2);
        let leaky = Probe::bump(vec![0.95, 0.0], 0.1).unwrap();
        let ok = Probe::bump(vec![0.0, 0.0], 0.1).unwrap();
        assert!(green_pairing_quadrature(&unit, &leaky, &ok).is_err());
        let o1 = Probe::bump(vec![0.1, 0.0], 0.2).unwrap();
        let o2 = Probe::bump(vec![0.2, 0.0], 0.2).unwrap();
        assert!(green_pairing_quadrature(&unit, &o1, &o2).is_err());
        // spectral route rejects nothing that overlaps legally
        let basis = Basis::build(BasisSpec::new(2, 4, 4).unwrap()).unwrap();
        assert!(green_pairing_spectral(&basis, &o1, &o2).is_ok());
    }
}
