//! Walk-on-spheres estimator of harmonic measure on the intersection of two
//! balls. Each step jumps to a uniform point on the largest centered sphere
//! that stays inside the region (shrunk by a safety factor); the walk stops
//! once it is within a thin shell of the boundary and the exit is projected
//! onto the nearer sphere. Exit laws on a ball boundary are compared against
//! the Poisson kernel through angular bins.

use rand::Rng;
use rand_distr::{Distribution, UnitCircle, UnitSphere};
use rayon::prelude::*;

use crate::error::{argument, geometry, Result};
use crate::geom::{dist, norm, Ball};
use crate::quad::gauss_legendre_on;
use crate::sampler::replica_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitFace {
    /// Boundary of the carved ball (the part away from the outer sphere).
    Carved,
    /// Boundary of the outer ball.
    Outer,
}

#[derive(Clone, Debug)]
pub struct ExitPoint {
    pub face: ExitFace,
    pub point: Vec<f64>,
    pub steps: u32,
}

#[derive(Clone, Debug)]
pub struct HittingRecord {
    pub n_walks: u64,
    pub carved_hits: u64,
    pub outer_hits: u64,
    pub mean_steps: f64,
    pub exits: Vec<ExitPoint>,
}

impl HittingRecord {
    /// Counts of exits through one face, binned on that face's sphere.
    pub fn bin_counts(&self, bins: &ExitBins, face: ExitFace) -> Vec<u64> {
        let mut counts = vec![0u64; bins.n_bins];
        for e in &self.exits {
            if e.face == face {
                counts[bins.classify(&e.point)] += 1;
            }
        }
        counts
    }
}

/// Region between the two spheres: points inside both balls.
#[derive(Clone, Debug)]
pub struct WosRegion {
    pub outer: Ball,
    pub carved: Ball,
    /// termination shell width, default 1e-4 times the outer radius
    pub shell: f64,
    /// fraction of the clearance used as the step radius
    pub step_factor: f64,
}

impl WosRegion {
    pub fn new(outer: Ball, carved: Ball) -> Result<Self> {
        if outer.dim() != carved.dim() {
            return argument("ball dimensions differ".to_string());
        }
        let gap = dist(&outer.center, &carved.center);
        if gap >= outer.radius + carved.radius {
            return geometry("the two balls do not intersect".to_string());
        }
        Ok(WosRegion {
            shell: 1e-4 * outer.radius,
            step_factor: 0.95,
            outer,
            carved,
        })
    }

    /// Clearance to the region boundary together with the nearer face.
    fn clearance(&self, x: &[f64]) -> (f64, ExitFace) {
        let d_out = self.outer.radius - dist(x, &self.outer.center);
        let d_car = self.carved.radius - dist(x, &self.carved.center);
        if d_car <= d_out {
            (d_car, ExitFace::Carved)
        } else {
            (d_out, ExitFace::Outer)
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.clearance(x).0 > 0.0
    }

    fn walk(&self, start: &[f64], rng: &mut impl Rng) -> Result<ExitPoint> {
        const MAX_STEPS: u32 = 1_000_000;
        let dim = self.outer.dim();
        let mut x = start.to_vec();
        let mut steps = 0u32;
        loop {
            let (d, face) = self.clearance(&x);
            if d < self.shell {
                let (c, r) = match face {
                    ExitFace::Carved => (&self.carved.center, self.carved.radius),
                    ExitFace::Outer => (&self.outer.center, self.outer.radius),
                };
                let v: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
                let nv = norm(&v);
                let point = c
                    .iter()
                    .zip(&v)
                    .map(|(cc, vv)| cc + r * vv / nv)
                    .collect();
                return Ok(ExitPoint { face, point, steps });
            }
            let u: Vec<f64> = if dim == 2 {
                UnitCircle.sample(rng).to_vec()
            } else {
                UnitSphere.sample(rng).to_vec()
            };
            for (xc, uc) in x.iter_mut().zip(&u) {
                *xc += self.step_factor * d * uc;
            }
            steps += 1;
            if steps > MAX_STEPS {
                return Err(crate::error::GffError::Numerics(
                    "walk failed to reach the boundary shell".to_string(),
                ));
            }
        }
    }
}

/// Run independent walks from a common start point; walk k uses the stream
/// (seed, k), so the record does not depend on thread count.
pub fn wos_harmonic_measure(
    start: &[f64],
    outer: &Ball,
    carved: &Ball,
    n_walks: u64,
    seed: u64,
) -> Result<HittingRecord> {
    if n_walks == 0 {
        return argument("need at least one walk".to_string());
    }
    let region = WosRegion::new(outer.clone(), carved.clone())?;
    let (d0, _) = region.clearance(start);
    if d0 <= region.shell {
        return geometry("start point is outside the region or inside its shell".to_string());
    }
    const CHUNK: u64 = 1024;
    let chunks: Vec<u64> = (0..n_walks.div_ceil(CHUNK)).collect();
    let exits: Vec<Vec<ExitPoint>> = chunks
        .par_iter()
        .map(|&c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n_walks);
            (lo..hi)
                .map(|w| {
                    let mut rng = replica_rng(seed, 0, w);
                    region.walk(start, &mut rng)
                })
                .collect::<Result<Vec<ExitPoint>>>()
        })
        .collect::<Result<_>>()?;
    let exits: Vec<ExitPoint> = exits.into_iter().flatten().collect();
    let carved_hits = exits.iter().filter(|e| e.face == ExitFace::Carved).count() as u64;
    let mean_steps = exits.iter().map(|e| e.steps as f64).sum::<f64>() / n_walks as f64;
    Ok(HittingRecord {
        n_walks,
        carved_hits,
        outer_hits: n_walks - carved_hits,
        mean_steps,
        exits,
    })
}

/// Angular bins on a sphere, oriented along the ray from the ball center
/// through a viewpoint z. In the plane the bins are equal sectors of the
/// signed angle around the center; in space they are equal-width slices of
/// the cosine of the polar angle, so the uniform law is flat in both cases.
#[derive(Clone, Debug)]
pub struct ExitBins {
    pub ball: Ball,
    pub z: Vec<f64>,
    pub n_bins: usize,
    axis: Vec<f64>,
}

impl ExitBins {
    pub fn new(ball: &Ball, z: &[f64], n_bins: usize) -> Result<Self> {
        if z.len() != ball.dim() {
            return argument("viewpoint dimension mismatch".to_string());
        }
        if n_bins < 2 {
            return argument("need at least 2 bins".to_string());
        }
        let rho = dist(z, &ball.center);
        if rho >= ball.radius * (1.0 - 1e-3) {
            return geometry("viewpoint too close to the sphere".to_string());
        }
        let axis = if rho < 1e-14 * ball.radius {
            let mut e = vec![0.0; ball.dim()];
            e[0] = 1.0;
            e
        } else {
            z.iter()
                .zip(&ball.center)
                .map(|(a, b)| (a - b) / rho)
                .collect()
        };
        Ok(ExitBins {
            ball: ball.clone(),
            z: z.to_vec(),
            n_bins,
            axis,
        })
    }

    pub fn classify(&self, p: &[f64]) -> usize {
        let v: Vec<f64> = p.iter().zip(&self.ball.center).map(|(a, b)| a - b).collect();
        let idx = if self.ball.dim() == 2 {
            // signed angle from the axis in (-pi, pi]
            let cosd = (v[0] * self.axis[0] + v[1] * self.axis[1]) / norm(&v);
            let sind = (self.axis[0] * v[1] - self.axis[1] * v[0]) / norm(&v);
            let delta = sind.atan2(cosd);
            ((delta + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
                * self.n_bins as f64) as usize
        } else {
            let t = v
                .iter()
                .zip(&self.axis)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / norm(&v);
            ((t + 1.0) / 2.0 * self.n_bins as f64) as usize
        };
        idx.min(self.n_bins - 1)
    }

    /// Bin probabilities of the uniform law: flat by construction.
    pub fn uniform_probs(&self) -> Vec<f64> {
        vec![1.0 / self.n_bins as f64; self.n_bins]
    }

    /// Bin probabilities of the exit law from z, i.e. the Poisson kernel
    /// integrated over each bin.
    pub fn poisson_probs(&self) -> Vec<f64> {
        let r = self.ball.radius;
        let rho = dist(&self.z, &self.ball.center);
        let n = self.n_bins;
        if rho < 1e-14 * r {
            return self.uniform_probs();
        }
        if self.ball.dim() == 2 {
            // (1/2pi) integral of (r^2 - rho^2) / (r^2 + rho^2 - 2 r rho cos)
            let mut probs = vec![0.0; n];
            let w = 2.0 * std::f64::consts::PI / n as f64;
            for (k, dst) in probs.iter_mut().enumerate() {
                let a = -std::f64::consts::PI + k as f64 * w;
                let (xs, ws) = gauss_legendre_on(a, a + w, 64);
                let mut acc = 0.0;
                for (&delta, &wq) in xs.iter().zip(&ws) {
                    acc += wq * (r * r - rho * rho)
                        / (r * r + rho * rho - 2.0 * r * rho * delta.cos());
                }
                *dst = acc / (2.0 * std::f64::consts::PI);
            }
            probs
        } else {
            // closed form: the slice integral of r (r^2 - rho^2) (A - Bt)^{-3/2}
            // telescopes through (r^2 - rho^2) / (2 rho sqrt(A - Bt))
            let a = r * r + rho * rho;
            let b = 2.0 * r * rho;
            let f = |t: f64| (r * r - rho * rho) / (2.0 * rho * (a - b * t).sqrt());
            let w = 2.0 / n as f64;
            (0..n)
                .map(|k| {
                    let lo = -1.0 + k as f64 * w;
                    f(lo + w) - f(lo)
                })
                .collect()
        }
    }
}
