//! Decomposition of the field over a sub-ball: the harmonic extension of the
//! boundary trace plus an independent zero-boundary remainder supported in
//! the sub-ball. Everything is expressed through overlap vectors, so the
//! per-replica cost of either piece is a single weighted dot product.

use crate::basis::Basis;
use crate::error::{argument, geometry, Result};
use crate::geom::{dist, norm, Ball};
use crate::kernels::poisson_kernel;
use crate::probe::Probe;
use crate::sampler::{FieldSample, Sampler};
use crate::sphere::SphereRule;

pub struct DmpEngine<'a, 'b> {
    pub sampler: &'a Sampler<'b>,
    pub inner: Ball,
    quad_order: usize,
}

impl<'a, 'b> DmpEngine<'a, 'b> {
    pub fn new(sampler: &'a Sampler<'b>, inner: Ball) -> Result<Self> {
        let order = 2 * sampler.basis.spec.n_max + 8;
        Self::with_quad_order(sampler, inner, order)
    }

    pub fn with_quad_order(
        sampler: &'a Sampler<'b>,
        inner: Ball,
        quad_order: usize,
    ) -> Result<Self> {
        let dim = sampler.basis.spec.dim;
        if inner.dim() != dim {
            return argument(format!("sub-ball dimension {} vs field {dim}", inner.dim()));
        }
        if !inner.strictly_inside(&Ball::unit(dim)) {
            return geometry("the sub-ball must lie strictly inside the domain".to_string());
        }
        Ok(DmpEngine {
            sampler,
            inner,
            quad_order,
        })
    }

    fn basis(&self) -> &Basis {
        self.sampler.basis
    }

    /// Overlap vector whose pairing gives the harmonic part at z, the
    /// Poisson average of the field trace on the sub-ball boundary.
    pub fn harmonic_overlaps(&self, z: &[f64]) -> Result<Vec<f64>> {
        Probe::PoissonSphere {
            sphere: self.inner.clone(),
            z: z.to_vec(),
            quad_order: Some(self.quad_order),
        }
        .overlaps(self.basis())
    }

    /// Harmonic part of one replica at z (convenience path; precompute the
    /// overlap vector when sweeping replicas).
    pub fn harmonic_value(&self, field: &FieldSample, z: &[f64]) -> Result<f64> {
        Ok(self.sampler.pair(field, &self.harmonic_overlaps(z)?))
    }

    /// Overlap vector of [phi(z0) minus the average of phi over the sphere of
    /// radius r_avg around z0], plus the worst pointwise mean-value defect of
    /// the Poisson kernel itself on the carrier sphere. The kernel is
    /// harmonic in the interior variable, so both quantities vanish up to
    /// quadrature error; pairing the vector against a replica gives that
    /// replica's mean-value residual.
    pub fn mean_value_residual(
        &self,
        z0: &[f64],
        r_avg: f64,
        avg_order: usize,
    ) -> Result<(Vec<f64>, f64)> {
        let dim = self.basis().spec.dim;
        if z0.len() != dim {
            return argument("dimension mismatch".to_string());
        }
        if !(r_avg > 0.0) {
            return argument("averaging radius must be positive".to_string());
        }
        let reach = dist(z0, &self.inner.center) + r_avg;
        if reach > self.inner.radius * (1.0 - 2e-3) {
            return geometry(
                "averaging sphere reaches the viewpoint margin of the sub-ball".to_string(),
            );
        }
        let avg_rule = SphereRule::new(dim, avg_order)?;
        let carrier = SphereRule::new(dim, self.quad_order)?;
        let mut resid = vec![0.0; self.basis().len()];
        let mut row = vec![0.0; self.basis().len()];
        let mut worst = 0.0_f64;
        for (u, &w) in carrier.nodes.iter().zip(&carrier.weights) {
            let theta: Vec<f64> = self
                .inner
                .center
                .iter()
                .zip(u)
                .map(|(c, uu)| c + self.inner.radius * uu)
                .collect();
            let p0 = poisson_kernel(&self.inner, z0, &theta)?;
            let mut pavg = 0.0;
            for (v, &wz) in avg_rule.nodes.iter().zip(&avg_rule.weights) {
                let z: Vec<f64> = z0.iter().zip(v).map(|(a, b)| a + r_avg * b).collect();
                pavg += wz * poisson_kernel(&self.inner, &z, &theta)?;
            }
            worst = worst.max((pavg - p0).abs());
            self.basis().eval_all(&theta, &mut row)?;
            for (dst, &v) in resid.iter_mut().zip(&row) {
                *dst += w * (p0 - pavg) * v;
            }
        }
        Ok((resid, worst))
    }

    /// Overlap vector of the harmonic sweep of a volume probe: pairing it
    /// gives the integral of the harmonic part against the probe density.
    /// Computed by swapping the order of integration, so the boundary sphere
    /// carries one quadrature and the probe keeps its own volume rule.
    pub fn sweep_correction(&self, probe: &Probe) -> Result<Vec<f64>> {
        self.check_support(probe)?;
        let dim = self.basis().spec.dim;
        let rule = SphereRule::new(dim, self.quad_order)?;
        let mut corr = vec![0.0; self.basis().len()];
        let mut row = vec![0.0; self.basis().len()];
        for (u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let theta: Vec<f64> = self
                .inner
                .center
                .iter()
                .zip(u)
                .map(|(c, uu)| c + self.inner.radius * uu)
                .collect();
            let q = probe.pair_function(dim, |x| poisson_kernel(&self.inner, x, &theta).unwrap())?;
            self.basis().eval_all(&theta, &mut row)?;
            for (dst, &v) in corr.iter_mut().zip(&row) {
                *dst += w * q * v;
            }
        }
        Ok(corr)
    }

    /// Overlap vector of the zero-boundary remainder against a volume probe
    /// supported in the sub-ball: the probe's own overlaps minus the sweep.
    pub fn bulk_overlaps(&self, probe: &Probe) -> Result<Vec<f64>> {
        let full = probe.overlaps(self.basis())?;
        let corr = self.sweep_correction(probe)?;
        Ok(full.iter().zip(&corr).map(|(a, b)| a - b).collect())
    }

    /// The remainder probes must be genuine volume densities supported
    /// strictly inside the sub-ball.
    fn check_support(&self, probe: &Probe) -> Result<()> {
        let margin = self.inner.radius * (1.0 - 1e-9);
        match probe {
            Probe::Bump(m) => {
                if dist(&m.center, &self.inner.center) + m.eps >= margin {
                    geometry("bump support reaches the sub-ball boundary".to_string())
                } else {
                    Ok(())
                }
            }
            Probe::Annulus(a) => {
                if norm(&self.inner.center) > 1e-14 {
                    return geometry(
                        "annular probes need a sub-ball centered at the origin".to_string(),
                    );
                }
                if a.hi >= margin {
                    geometry("annulus reaches the sub-ball boundary".to_string())
                } else {
                    Ok(())
                }
            }
            Probe::Sum(terms) => {
                for (_, p) in terms {
                    self.check_support(p)?;
                }
                Ok(())
            }
            _ => argument("remainder pairings need a volume density probe".to_string()),
        }
    }
}

/// Overlap vector of the field minus every sub-ball bulk, for a probe
/// split as one piece per ball. With a single ball this is exactly the
/// sweep correction, i.e. the harmonic-part pairing. The remainder is the
/// sum of the per-ball corrections and is harmonic across the union.
pub fn multi_ball_remainder(parts: &[(&DmpEngine, &Probe)]) -> Result<Vec<f64>> {
    let Some(((first, _), rest)) = parts.split_first() else {
        return argument("need at least one (engine, probe) part".to_string());
    };
    for (engine, _) in rest {
        if !std::ptr::eq(first.basis(), engine.basis()) {
            return argument("all engines must share one sampler".to_string());
        }
    }
    for (i, (ea, _)) in parts.iter().enumerate() {
        for (eb, _) in parts.iter().skip(i + 1) {
            if dist(&ea.inner.center, &eb.inner.center) <= ea.inner.radius + eb.inner.radius {
                return geometry("sub-balls must be pairwise disjoint".to_string());
            }
        }
    }
    let mut acc = vec![0.0; first.basis().len()];
    for (engine, probe) in parts {
        for (dst, v) in acc.iter_mut().zip(engine.sweep_correction(probe)?) {
            *dst += v;
        }
    }
    Ok(acc)
}

/// Long-format archive of harmonic-part values: one row per replica and
/// evaluation point.
pub fn write_decomposition_csv<W: std::io::Write>(
    points: &[Vec<f64>],
    rows: &[Vec<f64>],
    first_replica: u64,
    mut w: W,
) -> std::io::Result<()> {
    let dim = points.first().map_or(0, |p| p.len());
    let coords: Vec<String> = (1..=dim).map(|k| format!("z{k}")).collect();
    writeln!(w, "replica,{},phi", coords.join(","))?;
    for (rep, row) in rows.iter().enumerate() {
        for (p, v) in points.iter().zip(row) {
            let xyz: Vec<String> = p.iter().map(|c| format!("{c:.16e}")).collect();
            writeln!(
                w,
                "{},{},{v:.16e}",
                first_replica + rep as u64,
                xyz.join(",")
            )?;
        }
    }
    Ok(())
}
