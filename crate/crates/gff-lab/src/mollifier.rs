//! Smooth compactly supported test densities: radial mollifiers around a
//! point and annular bumps around the origin. Both are normalized to unit
//! mass.

use serde::{Deserialize, Serialize};

use crate::error::{geometry, Result};
use crate::geom::{dist, norm, sphere_area};
use crate::quad::integrate;

/// The standard C-infinity bump profile on (-1, 1), zero outside.
pub fn bump_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

const PROFILE_QUAD: usize = 200;

/// Unit-mass mollifier z -> C exp(-1 / (1 - |z - center|^2 / eps^2)) on the
/// ball of radius eps around `center`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialMollifier {
    pub center: Vec<f64>,
    pub eps: f64,
    norm_const: f64,
}

impl RadialMollifier {
    pub fn new(center: Vec<f64>, eps: f64) -> Result<Self> {
        if center.len() < 2 {
            return geometry(format!(
                "mollifier dimension must be >= 2, got {}",
                center.len()
            ));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return geometry(format!("mollifier radius must be positive, got {eps}"));
        }
        let dim = center.len();
        // total mass = C * omega * eps^d * \int_0^1 profile(t) t^{d-1} dt
        let radial = integrate(0.0, 1.0, PROFILE_QUAD, |t| {
            bump_profile(t) * t.powi(dim as i32 - 1)
        });
        let norm_const = 1.0 / (sphere_area(dim) * eps.powi(dim as i32) * radial);
        Ok(RadialMollifier {
            center,
            eps,
            norm_const,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let t = dist(x, &self.center) / self.eps;
        self.norm_const * bump_profile(t)
    }

    /// Density as a function of the distance to the center.
    pub fn radial_density(&self, rho: f64) -> f64 {
        self.norm_const * bump_profile(rho / self.eps)
    }

    /// Total mass recomputed with an independent node count.
    pub fn mass_quadrature(&self, n_radial: usize) -> f64 {
        let dim = self.dim();
        sphere_area(dim)
            * integrate(0.0, self.eps, n_radial, |rho| {
                self.radial_density(rho) * rho.powi(dim as i32 - 1)
            })
    }
}

/// Unit-mass rotationally symmetric bump supported on the annulus
/// lo <= |z| <= hi around the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnularBump {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    norm_const: f64,
}

impl AnnularBump {
    pub fn new(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if dim < 2 {
            return geometry(format!("annulus dimension must be >= 2, got {dim}"));
        }
        if !(0.0 <= lo && lo < hi) || !hi.is_finite() {
            return geometry(format!("annulus radii must satisfy 0 <= lo < hi, got [{lo}, {hi}]"));
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let radial = integrate(lo, hi, PROFILE_QUAD, |rho| {
            bump_profile((rho - mid) / half) * rho.powi(dim as i32 - 1)
        });
        Ok(AnnularBump {
            dim,
            lo,
            hi,
            norm_const: 1.0 / (sphere_area(dim) * radial),
        })
    }

    pub fn radial_density(&self, rho: f64) -> f64 {
        let mid = 0.5 * (self.lo + self.hi);
        let half = 0.5 * (self.hi - self.lo);
        self.norm_const * bump_profile((rho - mid) / half)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial_density(norm(x))
    }

    pub fn mass_quadrature(&self, n_radial: usize) -> f64 {
        sphere_area(self.dim)
            * integrate(self.lo, self.hi, n_radial, |rho| {
                self.radial_density(rho) * rho.powi(self.dim as i32 - 1)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphereRule;

    #[test]
    fn unit_mass_under_refined_quadrature() {
        for dim in [2usize, 3] {
            for eps in [0.05, 0.1, 0.3] {
                let m = RadialMollifier::new(vec![0.2; dim], eps).unwrap();
                for n in [150usize, 400, 800] {
                    let mass = m.mass_quadrature(n);
                    assert!(
                        (mass - 1.0).abs() < 1e-8,
                        "dim {dim} eps {eps} n {n}: mass {mass}"
                    );
                }
            }
        }
    }

    #[test]
    fn unit_mass_under_product_rule() {
        // Fully independent route: radial nodes times a sphere rule.
        let m = RadialMollifier::new(vec![0.1, -0.2], 0.15).unwrap();
        let rule = SphereRule::new(2, 8).unwrap();
        let mass = integrate(0.0, m.eps, 300, |rho| {
            let shell = rule.integrate(|u| {
                let x = [m.center[0] + rho * u[0], m.center[1] + rho * u[1]];
                m.eval(&x)
            });
            shell * sphere_area(2) * rho
        });
        assert!((mass - 1.0).abs() < 1e-8, "product-rule mass {mass}");
    }

    #[test]
    fn support_and_center_value() {
        let m = RadialMollifier::new(vec![0.0, 0.0, 0.0], 0.2).unwrap();
        assert_eq!(m.eval(&[0.25, 0.0, 0.0]), 0.0);
        assert_eq!(m.eval(&[0.2, 0.0, 0.0]), 0.0);
        let c = m.eval(&[0.0, 0.0, 0.0]);
        assert!((c - m.norm_const * (-1.0_f64).exp()).abs() < 1e-15);
        assert!(m.eval(&[0.1999, 0.0, 0.0]) < 1e-60 * c);
    }

    #[test]
    fn annular_bump_mass_and_support() {
        for dim in [2usize, 3] {
            let a = AnnularBump::new(dim, 0.5, 0.75).unwrap();
            assert!((a.mass_quadrature(500) - 1.0).abs() < 1e-8);
            assert_eq!(a.radial_density(0.49), 0.0);
            assert_eq!(a.radial_density(0.76), 0.0);
            assert!(a.radial_density(0.625) > 0.0);
        }
        assert!(AnnularBump::new(2, 0.7, 0.6).is_err());
    }
}
