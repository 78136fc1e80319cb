//! Probes: the test functions and measures the field gets paired against,
//! together with their overlap integrals against every basis mode.
//!
//! Overlaps use exact structure wherever it exists. A Helmholtz
//! eigenfunction averaged over a sphere of radius rho equals its center
//! value times a universal radial factor (J_0(alpha rho) in the plane,
//! sinc(alpha rho) in space), which collapses the volume integral against a
//! radial mollifier to one 1-d quadrature per eigenvalue. Rotationally
//! symmetric probes about the origin only see degree-0 modes. Measures on
//! concentric spheres reduce to the radial factor by angular orthonormality.

use crate::basis::Basis;
use crate::bessel::helmholtz_mean;
use crate::error::{argument, geometry, Result};
use crate::geom::{norm, sphere_area, Ball};
use crate::harmonics::{eval_psi, multiplicity};
use crate::kernels::poisson_kernel;
use crate::mollifier::{AnnularBump, RadialMollifier};
use crate::quad::gauss_legendre_on;
use crate::sphere::SphereRule;

#[derive(Clone, Debug)]
pub enum Probe {
    /// Smooth unit-mass bump; must sit inside or outside the ball, not across
    /// the boundary.
    Bump(RadialMollifier),
    /// Rotationally symmetric unit-mass bump on an annulus about the origin.
    Annulus(AnnularBump),
    /// A single basis eigenfunction.
    Mode { n: usize, j: usize, i: usize },
    /// Degree-(n, j) harmonic surface measure on the sphere of radius r:
    /// psi d(uniform probability measure).
    SphereHarmonic { n: usize, j: usize, r: f64 },
    /// Poisson-kernel-weighted probability measure on a sphere, seen from z.
    PoissonSphere {
        sphere: Ball,
        z: Vec<f64>,
        quad_order: Option<usize>,
    },
    /// Finite linear combination of probes.
    Sum(Vec<(f64, Probe)>),
}

impl Probe {
    pub fn bump(center: Vec<f64>, eps: f64) -> Result<Probe> {
        Ok(Probe::Bump(RadialMollifier::new(center, eps)?))
    }

    pub fn annulus(dim: usize, lo: f64, hi: f64) -> Result<Probe> {
        Ok(Probe::Annulus(AnnularBump::new(dim, lo, hi)?))
    }

    pub fn scaled(a: f64, p: Probe) -> Probe {
        Probe::Sum(vec![(a, p)])
    }

    /// Overlap integral against every mode of the basis, in mode order.
    pub fn overlaps(&self, basis: &Basis) -> Result<Vec<f64>> {
        let dim = basis.spec.dim;
        match self {
            Probe::Bump(m) => bump_overlaps(basis, m),
            Probe::Annulus(a) => {
                if a.dim != dim {
                    return argument(format!("annulus dimension {} vs basis {dim}", a.dim));
                }
                annulus_overlaps(basis, a)
            }
            Probe::Mode { n, j, i } => {
                let spec = basis.spec;
                if *n > spec.n_max || *j < 1 || *j > multiplicity(dim, *n) || *i < 1
                    || *i > spec.k_max
                {
                    return argument(format!("mode ({n},{j},{i}) outside the basis truncation"));
                }
                let mut ov = vec![0.0; basis.len()];
                ov[basis.mode_index(*n, *j, *i)] = 1.0;
                Ok(ov)
            }
            Probe::SphereHarmonic { n, j, r } => {
                if !(*r > 0.0 && *r < 1.0) {
                    return argument(format!("sphere radius {r} outside (0, 1)"));
                }
                if *n > basis.spec.n_max || *j < 1 || *j > multiplicity(dim, *n) {
                    return argument(format!("harmonic ({n},{j}) outside the basis truncation"));
                }
                let mut ov = vec![0.0; basis.len()];
                for i in 1..=basis.spec.k_max {
                    ov[basis.mode_index(*n, *j, i)] = basis.radial_part(*n, i, *r);
                }
                Ok(ov)
            }
            Probe::PoissonSphere {
                sphere,
                z,
                quad_order,
            } => poisson_overlaps(basis, sphere, z, *quad_order),
            Probe::Sum(terms) => {
                let mut acc = vec![0.0; basis.len()];
                for (a, p) in terms {
                    for (dst, src) in acc.iter_mut().zip(p.overlaps(basis)?) {
                        *dst += a * src;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Integral of a function against this probe (density times Lebesgue for
    /// volume probes, the measure itself for surface probes).
    pub fn pair_function(&self, dim: usize, g: impl Fn(&[f64]) -> f64) -> Result<f64> {
        self.pair_function_dyn(dim, &g)
    }

    fn pair_function_dyn(&self, dim: usize, g: &dyn Fn(&[f64]) -> f64) -> Result<f64> {
        match self {
            Probe::Bump(m) => {
                if m.dim() != dim {
                    return argument("dimension mismatch".to_string());
                }
                let rule = SphereRule::new(dim, 16)?;
                let (rs, ws) = gauss_legendre_on(0.0, m.eps, 48);
                let mut acc = 0.0;
                for (&rho, &w) in rs.iter().zip(&ws) {
                    let shell = rule.integrate(|u| {
                        let x: Vec<f64> =
                            m.center.iter().zip(u).map(|(c, uu)| c + rho * uu).collect();
                        g(&x)
                    });
                    acc += w * m.radial_density(rho) * shell
                        * sphere_area(dim)
                        * rho.powi(dim as i32 - 1);
                }
                Ok(acc)
            }
            Probe::Annulus(a) => {
                if a.dim != dim {
                    return argument("dimension mismatch".to_string());
                }
                let rule = SphereRule::new(dim, 16)?;
                let (rs, ws) = gauss_legendre_on(a.lo, a.hi, 64);
                let mut acc = 0.0;
                for (&rho, &w) in rs.iter().zip(&ws) {
                    let shell = rule.integrate(|u| {
                        let x: Vec<f64> = u.iter().map(|uu| rho * uu).collect();
                        g(&x)
                    });
                    acc += w * a.radial_density(rho) * shell
                        * sphere_area(dim)
                        * rho.powi(dim as i32 - 1);
                }
                Ok(acc)
            }
            Probe::SphereHarmonic { n, j, r } => {
                let rule = SphereRule::new(dim, 2 * n + 24)?;
                Ok(rule.integrate(|u| {
                    let x: Vec<f64> = u.iter().map(|uu| r * uu).collect();
                    eval_psi(dim, *n, *j, u).unwrap() * g(&x)
                }))
            }
            Probe::PoissonSphere {
                sphere,
                z,
                quad_order,
            } => {
                let rule = SphereRule::new(dim, quad_order.unwrap_or(40))?;
                Ok(rule.integrate(|u| {
                    let theta: Vec<f64> = sphere
                        .center
                        .iter()
                        .zip(u)
                        .map(|(c, uu)| c + sphere.radius * uu)
                        .collect();
                    poisson_kernel(sphere, z, &theta).unwrap() * g(&theta)
                }))
            }
            Probe::Sum(terms) => {
                let mut acc = 0.0;
                for (a, p) in terms {
                    acc += a * p.pair_function_dyn(dim, g)?;
                }
                Ok(acc)
            }
            Probe::Mode { .. } => {
                argument("pairing a bare mode against a function needs the basis".to_string())
            }
        }
    }
}

fn bump_overlaps(basis: &Basis, m: &RadialMollifier) -> Result<Vec<f64>> {
    let dim = basis.spec.dim;
    if m.dim() != dim {
        return argument(format!("mollifier dimension {} vs basis {dim}", m.dim()));
    }
    let t = norm(&m.center);
    if t - m.eps >= 1.0 {
        return Ok(vec![0.0; basis.len()]);
    }
    if t + m.eps > 1.0 - 1e-12 {
        return geometry(format!(
            "bump support [{:.3}, {:.3}] crosses the domain boundary",
            t - m.eps,
            t + m.eps
        ));
    }
    // per-eigenvalue radial weight from the spherical mean-value identity
    let area = sphere_area(dim);
    let mut weights = vec![vec![0.0; basis.spec.k_max]; basis.spec.n_max + 1];
    for n in 0..=basis.spec.n_max {
        for i in 1..=basis.spec.k_max {
            let alpha = basis.alpha(n, i);
            let nodes = 48 + (1.6 * alpha * m.eps).ceil() as usize;
            let (rs, ws) = gauss_legendre_on(0.0, m.eps, nodes);
            let mut acc = 0.0;
            for (&rho, &w) in rs.iter().zip(&ws) {
                acc += w
                    * m.radial_density(rho)
                    * helmholtz_mean(dim, alpha * rho)
                    * rho.powi(dim as i32 - 1);
            }
            weights[n][i - 1] = area * acc;
        }
    }
    let mut ov = vec![0.0; basis.len()];
    for (k, mode) in basis.modes.iter().enumerate() {
        ov[k] = basis.eval_mode(k, &m.center)? * weights[mode.n][mode.i - 1];
    }
    Ok(ov)
}

fn annulus_overlaps(basis: &Basis, a: &AnnularBump) -> Result<Vec<f64>> {
    let dim = basis.spec.dim;
    if a.lo >= 1.0 {
        return Ok(vec![0.0; basis.len()]);
    }
    if a.hi > 1.0 - 1e-12 {
        return geometry(format!(
            "annulus [{:.4}, {:.4}] crosses the domain boundary",
            a.lo, a.hi
        ));
    }
    let area = sphere_area(dim);
    let mut ov = vec![0.0; basis.len()];
    for i in 1..=basis.spec.k_max {
        let alpha = basis.alpha(0, i);
        let nodes = 64 + (0.8 * alpha * (a.hi - a.lo)).ceil() as usize;
        let (rs, ws) = gauss_legendre_on(a.lo, a.hi, nodes);
        let mut acc = 0.0;
        for (&rho, &w) in rs.iter().zip(&ws) {
            acc += w
                * a.radial_density(rho)
                * crate::basis::radial_f(dim, 0, alpha * rho)
                * rho.powi(dim as i32 - 1);
        }
        ov[basis.mode_index(0, 1, i)] = area * basis.norm_const(0, i) * acc;
    }
    Ok(ov)
}

fn poisson_overlaps(
    basis: &Basis,
    sphere: &Ball,
    z: &[f64],
    quad_order: Option<usize>,
) -> Result<Vec<f64>> {
    let dim = basis.spec.dim;
    if sphere.dim() != dim || z.len() != dim {
        return argument("dimension mismatch".to_string());
    }
    let unit = Ball::unit(dim);
    if !sphere.strictly_inside(&unit) {
        return geometry("the carrier sphere must lie strictly inside the domain".to_string());
    }
    let dz = crate::geom::dist(z, &sphere.center);
    if dz > sphere.radius * (1.0 - 1e-3) {
        return geometry(format!(
            "viewpoint at distance {dz:.6} from the center is too close to the sphere of radius {}",
            sphere.radius
        ));
    }
    let rho = sphere.radius;
    let concentric = norm(&sphere.center) < 1e-14;
    let mut ov = vec![0.0; basis.len()];
    if concentric {
        // expansion on the sphere meets the Poisson extension of each psi
        let rz = norm(z);
        for (k, mode) in basis.modes.iter().enumerate() {
            let radial = basis.radial_part(mode.n, mode.i, rho);
            let ang = if rz == 0.0 {
                if mode.n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                let theta: Vec<f64> = z.iter().map(|c| c / rz).collect();
                (rz / rho).powi(mode.n as i32) * eval_psi(dim, mode.n, mode.j, &theta)?
            };
            ov[k] = radial * ang;
        }
        return Ok(ov);
    }
    let order = quad_order.unwrap_or(2 * basis.spec.n_max + 8);
    let rule = SphereRule::new(dim, order)?;
    let mut row = vec![0.0; basis.len()];
    for (u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let theta: Vec<f64> = sphere
            .center
            .iter()
            .zip(u)
            .map(|(c, uu)| c + rho * uu)
            .collect();
        let p = poisson_kernel(sphere, z, &theta)?;
        basis.eval_all(&theta, &mut row)?;
        for (dst, &v) in ov.iter_mut().zip(&row) {
            *dst += w * p * v;
        }
    }
    Ok(ov)
}
