//! Real spherical harmonics, orthonormal against the uniform probability
//! measure on the sphere, and their solid (harmonic polynomial) extensions.
//!
//! Index conventions: degree n >= 0; within a degree, j runs from 1 to the
//! multiplicity. Dimension 2 pairs cosine (j = 1) with sine (j = 2);
//! dimension 3 maps j = 1..2n+1 to azimuthal orders m = -n..n in increasing
//! order.

use crate::error::{argument, Result};
use crate::geom::norm;

/// Number of linearly independent degree-n harmonics.
pub fn multiplicity(dim: usize, n: usize) -> usize {
    match dim {
        2 => {
            if n == 0 {
                1
            } else {
                2
            }
        }
        3 => 2 * n + 1,
        _ => panic!("harmonics implemented for dimensions 2 and 3"),
    }
}

/// Associated Legendre P_n^m without the Condon-Shortley phase.
fn assoc_legendre(n: usize, m: usize, x: f64) -> f64 {
    debug_assert!(m <= n);
    // P_m^m = (2m-1)!! (1 - x^2)^{m/2}
    let mut pmm = 1.0;
    if m > 0 {
        let sx = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= fact * sx;
            fact += 2.0;
        }
    }
    if n == m {
        return pmm;
    }
    let mut pm1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if n == m + 1 {
        return pm1;
    }
    let mut p = 0.0;
    for k in (m + 2)..=n {
        let kf = k as f64;
        let mf = m as f64;
        p = ((2.0 * kf - 1.0) * x * pm1 - (kf + mf - 1.0) * pmm) / (kf - mf);
        pmm = pm1;
        pm1 = p;
    }
    p
}

/// sqrt((n-m)! / (n+m)!) computed without overflow.
fn half_norm_ratio(n: usize, m: usize) -> f64 {
    let mut r = 1.0;
    for k in (n - m + 1)..=(n + m) {
        r /= k as f64;
    }
    r.sqrt()
}

/// Degree-n spherical harmonic psi_{n,j}, evaluated at a unit vector.
/// Unit norm in L^2 of the uniform probability measure on the sphere.
pub fn eval_psi(dim: usize, n: usize, j: usize, theta: &[f64]) -> Result<f64> {
    let mult = multiplicity(dim, n);
    if j < 1 || j > mult {
        return argument(format!("harmonic index j = {j} out of 1..={mult} for degree {n}"));
    }
    if theta.len() != dim {
        return argument(format!("expected a {dim}-dimensional direction"));
    }
    debug_assert!((norm(theta) - 1.0).abs() < 1e-8, "direction must be unit");
    match dim {
        2 => {
            if n == 0 {
                return Ok(1.0);
            }
            let ang = theta[1].atan2(theta[0]);
            let v = if j == 1 {
                (n as f64 * ang).cos()
            } else {
                (n as f64 * ang).sin()
            };
            Ok(std::f64::consts::SQRT_2 * v)
        }
        3 => {
            let m = j as i64 - n as i64 - 1;
            let ct = theta[2].clamp(-1.0, 1.0);
            if m == 0 {
                let norm = ((2 * n + 1) as f64).sqrt();
                return Ok(norm * assoc_legendre(n, 0, ct));
            }
            let ma = m.unsigned_abs() as usize;
            let az = theta[1].atan2(theta[0]);
            let trig = if m > 0 {
                (ma as f64 * az).cos()
            } else {
                (ma as f64 * az).sin()
            };
            let norm = (2.0 * (2 * n + 1) as f64).sqrt() * half_norm_ratio(n, ma);
            Ok(norm * assoc_legendre(n, ma, ct) * trig)
        }
        _ => argument("harmonics implemented for dimensions 2 and 3".to_string()),
    }
}

/// Solid harmonic |z|^n psi_{n,j}(z / |z|): a degree-n harmonic polynomial.
pub fn solid_harmonic(dim: usize, n: usize, j: usize, z: &[f64]) -> Result<f64> {
    let r = norm(z);
    if r == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let theta: Vec<f64> = z.iter().map(|a| a / r).collect();
    Ok(r.powi(n as i32) * eval_psi(dim, n, j, &theta)?)
}

/// Pairing of psi_{n,j} with phi restricted to the sphere of radius r, against
/// the uniform probability measure, using a caller-supplied quadrature rule.
pub fn nu_pair_with(
    rule: &crate::sphere::SphereRule,
    n: usize,
    j: usize,
    r: f64,
    phi: impl Fn(&[f64]) -> f64,
) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return argument(format!("pairing radius {r} outside (0, 1)"));
    }
    let dim = rule.dim;
    Ok(rule.integrate(|u| {
        let z: Vec<f64> = u.iter().map(|c| c * r).collect();
        eval_psi(dim, n, j, u).unwrap() * phi(&z)
    }))
}

/// [`nu_pair_with`] against precomputed sphere values: values[q] must hold
/// phi at radius r times the rule's q-th node. Lets a battery of (n, j)
/// pairings share one sweep of phi evaluations per radius.
pub fn nu_pair_values(
    rule: &crate::sphere::SphereRule,
    n: usize,
    j: usize,
    values: &[f64],
) -> Result<f64> {
    if values.len() != rule.len() {
        return argument(format!(
            "value table has {} entries for a {}-node rule",
            values.len(),
            rule.len()
        ));
    }
    let dim = rule.dim;
    let mut acc = 0.0;
    for ((u, w), v) in rule.nodes.iter().zip(&rule.weights).zip(values) {
        acc += w * eval_psi(dim, n, j, u)? * v;
    }
    Ok(acc)
}

/// [`nu_pair_with`] with a rule sized to resolve degree-n harmonics plus
/// generic smooth data.
pub fn nu_pair(
    dim: usize,
    n: usize,
    j: usize,
    r: f64,
    phi: impl Fn(&[f64]) -> f64,
) -> Result<f64> {
    let rule = crate::sphere::SphereRule::new(dim, 2 * n + 24)?;
    nu_pair_with(&rule, n, j, r, phi)
}

/// Max deviation of r^{-n} nu_r from its mean across the radius grid. Zero for
/// harmonic phi up to quadrature error.
pub fn check_constancy(
    dim: usize,
    n: usize,
    j: usize,
    phi: impl Fn(&[f64]) -> f64,
    radii: &[f64],
) -> Result<f64> {
    if radii.is_empty() {
        return argument("empty radius grid".to_string());
    }
    let rule = crate::sphere::SphereRule::new(dim, 2 * n + 24)?;
    let vals: Vec<f64> = radii
        .iter()
        .map(|&r| Ok(nu_pair_with(&rule, n, j, r, &phi)? / r.powi(n as i32)))
        .collect::<Result<_>>()?;
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    Ok(vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
}
