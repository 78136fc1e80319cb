//! Points, balls and polar coordinates in d >= 2 dimensions.
//!
//! Points are plain `&[f64]` slices; the dimension is carried by the
//! containing `Ball` or passed explicitly.

use serde::{Deserialize, Serialize};

use crate::error::{geometry, GffError, Result};

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub fn scale_add(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Surface area of the unit sphere in R^d.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        d => {
            // 2 pi^{d/2} / Gamma(d/2), evaluated by recursion from d = 2, 3
            let mut a2 = 2.0 * std::f64::consts::PI;
            let mut a3 = 4.0 * std::f64::consts::PI;
            // omega_{d} = 2 pi / (d - 2) * omega_{d-2}
            let mut k = 4;
            loop {
                let next = 2.0 * std::f64::consts::PI / (k as f64 - 2.0) * a2;
                if k == d {
                    return next;
                }
                a2 = a3;
                a3 = next;
                k += 1;
            }
        }
    }
}

/// Open ball `center + radius * B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.len() < 2 {
            return geometry(format!("ball dimension must be >= 2, got {}", center.len()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return geometry(format!("ball radius must be positive and finite, got {radius}"));
        }
        Ok(Ball { center, radius })
    }

    pub fn unit(dim: usize) -> Self {
        Ball {
            center: vec![0.0; dim],
            radius: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Strictly inside the open ball.
    pub fn contains(&self, x: &[f64]) -> bool {
        dist(x, &self.center) < self.radius
    }

    /// Inside the closed ball, up to a small tolerance on the boundary.
    pub fn contains_closed(&self, x: &[f64]) -> bool {
        dist(x, &self.center) <= self.radius * (1.0 + 1e-12)
    }

    /// Map a point into unit-ball coordinates.
    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) / self.radius)
            .collect()
    }

    /// Map a unit-ball point back into this ball.
    pub fn from_unit(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.center)
            .map(|(a, c)| c + self.radius * a)
            .collect()
    }

    /// True if `self` lies strictly inside `outer` with margin to spare.
    pub fn strictly_inside(&self, outer: &Ball) -> bool {
        dist(&self.center, &outer.center) + self.radius < outer.radius * (1.0 - 1e-12)
    }
}

/// Polar representation: radius plus a unit direction vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: Vec<f64>,
}

impl PolarPoint {
    pub fn new(r: f64, theta: Vec<f64>) -> Result<Self> {
        if r < 0.0 {
            return geometry(format!("polar radius must be nonnegative, got {r}"));
        }
        let n = norm(&theta);
        if (n - 1.0).abs() > 1e-9 {
            return geometry(format!("polar direction must be a unit vector, |theta| = {n}"));
        }
        Ok(PolarPoint { r, theta })
    }

    pub fn from_cartesian(x: &[f64]) -> Result<Self> {
        let r = norm(x);
        if r == 0.0 {
            return geometry("polar direction undefined at the origin".to_string());
        }
        Ok(PolarPoint {
            r,
            theta: x.iter().map(|a| a / r).collect(),
        })
    }

    pub fn to_cartesian(&self) -> Vec<f64> {
        self.theta.iter().map(|a| a * self.r).collect()
    }

    /// Planar angle in (-pi, pi]; only defined in dimension 2.
    pub fn angle(&self) -> Result<f64> {
        if self.theta.len() != 2 {
            return Err(GffError::Argument(
                "planar angle is only defined in dimension 2".into(),
            ));
        }
        Ok(self.theta[1].atan2(self.theta[0]))
    }
}

/// Unit direction from a planar angle.
pub fn unit2(theta: f64) -> Vec<f64> {
    vec![theta.cos(), theta.sin()]
}

/// Unit direction from polar angle (from the +z axis) and azimuth.
pub fn unit3(polar: f64, azimuth: f64) -> Vec<f64> {
    let s = polar.sin();
    vec![s * azimuth.cos(), s * azimuth.sin(), polar.cos()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area_low_dims() {
        assert!((sphere_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-15);
        // omega_3 for d=4 is 2 pi^2
        assert!((sphere_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn ball_rejects_bad_input() {
        assert!(Ball::new(vec![0.0], 1.0).is_err());
        assert!(Ball::new(vec![0.0, 0.0], 0.0).is_err());
        assert!(Ball::new(vec![0.0, 0.0], -1.0).is_err());
        assert!(Ball::new(vec![0.0, 0.0], f64::NAN).is_err());
    }

    #[test]
    fn ball_coordinate_round_trip() {
        let b = Ball::new(vec![0.3, -0.2, 0.1], 0.75).unwrap();
        let x = vec![0.5, 0.1, -0.4];
        let u = b.to_unit(&x);
        let back = b.from_unit(&u);
        for (a, c) in x.iter().zip(&back) {
            assert!((a - c).abs() < 1e-15);
        }
    }

    #[test]
    fn polar_round_trip() {
        let x = vec![0.3, -0.4];
        let p = PolarPoint::from_cartesian(&x).unwrap();
        assert!((p.r - 0.5).abs() < 1e-15);
        let back = p.to_cartesian();
        assert!(dist(&x, &back) < 1e-15);
    }

    #[test]
    fn polar_rejects_origin_and_unnormalized() {
        assert!(PolarPoint::from_cartesian(&[0.0, 0.0]).is_err());
        assert!(PolarPoint::new(1.0, vec![0.5, 0.5]).is_err());
        assert!(PolarPoint::new(-0.1, vec![1.0, 0.0]).is_err());
    }
}
