//! Monte Carlo realizations of the field. A replica is a vector of standard
//! normal coefficients, one per basis mode; pairings against probes are
//! weighted dot products with the per-mode amplitude sqrt(kappa / lambda),
//! which makes the pairing covariance equal to the ball Green's function in
//! the s-normalization.
//!
//! Randomness discipline: one master seed; every (lane, replica) pair maps
//! to its own counter-based stream, so results do not depend on scheduling
//! or on how many replicas other lanes consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::basis::Basis;
use crate::error::{argument, Result};
use crate::kernels::{green_normalization, scaling_s};
use crate::probe::Probe;

/// Independent generator for one replica of one lane. Lanes keep logically
/// distinct random objects (field draws, exact paths, noise for shuffles)
/// from colliding under a shared master seed.
pub fn replica_rng(seed: u64, lane: u64, replica: u64) -> ChaCha8Rng {
    debug_assert!(replica < 1 << 40);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((lane << 40) | replica);
    rng
}

/// One truncated field realization: iid standard normal mode coefficients.
#[derive(Clone, Debug)]
pub struct FieldSample {
    pub seed: u64,
    pub replica: u64,
    pub xi: Vec<f64>,
}

/// Values of a radius-indexed process on a grid.
#[derive(Clone, Debug)]
pub struct RadialPath {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

pub struct Sampler<'a> {
    pub basis: &'a Basis,
    pub seed: u64,
    /// sqrt(kappa / lambda_k) per mode
    kl_std: Vec<f64>,
}

impl<'a> Sampler<'a> {
    pub fn new(basis: &'a Basis, seed: u64) -> Self {
        let kappa = green_normalization(basis.spec.dim);
        let kl_std = basis
            .modes
            .iter()
            .map(|m| (kappa / m.lambda).sqrt())
            .collect();
        Sampler {
            basis,
            seed,
            kl_std,
        }
    }

    pub fn sample(&self, replica: u64) -> FieldSample {
        self.sample_lane(0, replica)
    }

    pub fn sample_lane(&self, lane: u64, replica: u64) -> FieldSample {
        let mut rng = replica_rng(self.seed, lane, replica);
        let xi = (0..self.basis.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        FieldSample {
            seed: self.seed,
            replica,
            xi,
        }
    }

    /// Pairing of a replica against a precomputed overlap vector.
    pub fn pair(&self, field: &FieldSample, overlaps: &[f64]) -> f64 {
        debug_assert_eq!(overlaps.len(), self.basis.len());
        self.kl_std
            .iter()
            .zip(field.xi.iter().zip(overlaps))
            .map(|(&s, (&x, &o))| s * x * o)
            .sum()
    }

    /// Pairing against a probe; computes the overlap vector on the fly.
    pub fn pair_probe(&self, field: &FieldSample, probe: &Probe) -> Result<f64> {
        Ok(self.pair(field, &probe.overlaps(self.basis)?))
    }

    /// Weight vector turning a replica into the harmonic pairing
    /// r^{-n} nu_r against psi_{n,j}, already multiplied by the mode
    /// amplitudes. Only the (n, j) radial block is nonzero, so the result is
    /// the dense block plus its offset.
    fn nu_block(&self, n: usize, j: usize, r: f64) -> Result<(usize, Vec<f64>)> {
        if !(r > 0.0 && r < 1.0) {
            return argument(format!("pairing radius {r} outside (0, 1)"));
        }
        let spec = self.basis.spec;
        if n > spec.n_max || j < 1 || j > crate::harmonics::multiplicity(spec.dim, n) {
            return argument(format!("harmonic ({n},{j}) outside the basis truncation"));
        }
        let k0 = self.basis.mode_index(n, j, 1);
        let block = (1..=spec.k_max)
            .map(|i| self.kl_std[k0 + i - 1] * self.basis.radial_part(n, i, r))
            .collect();
        Ok((k0, block))
    }

    /// Closed-form pairing against the degree-(n, j) surface harmonic on the
    /// sphere of radius r.
    pub fn pair_nu(&self, field: &FieldSample, n: usize, j: usize, r: f64) -> Result<f64> {
        let (k0, block) = self.nu_block(n, j, r)?;
        Ok(block
            .iter()
            .zip(&field.xi[k0..k0 + block.len()])
            .map(|(&w, &x)| w * x)
            .sum())
    }

    /// Spherical averages of the replica around the origin on a radius grid.
    pub fn spherical_average_path(&self, field: &FieldSample, radii: &[f64]) -> Result<RadialPath> {
        check_grid(radii)?;
        let values = radii
            .iter()
            .map(|&r| self.pair_nu(field, 0, 1, r))
            .collect::<Result<_>>()?;
        Ok(RadialPath {
            radii: radii.to_vec(),
            values,
        })
    }

    /// Weighted radial combination A_r = sum_i a_i r^{-n_i} nu_r^{psi_i}.
    pub fn a_process(
        &self,
        field: &FieldSample,
        coeffs: &[(f64, usize, usize)],
        radii: &[f64],
    ) -> Result<RadialPath> {
        if coeffs.is_empty() {
            return argument("empty coefficient list".to_string());
        }
        check_grid(radii)?;
        let mut values = vec![0.0; radii.len()];
        for &(a, n, j) in coeffs {
            for (v, &r) in values.iter_mut().zip(radii) {
                *v += a * r.powi(-(n as i32)) * self.pair_nu(field, n, j, r)?;
            }
        }
        Ok(RadialPath {
            radii: radii.to_vec(),
            values,
        })
    }
}

fn check_grid(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return argument("empty radius grid".to_string());
    }
    for w in radii.windows(2) {
        if w[1] <= w[0] {
            return argument("radius grid must be strictly increasing".to_string());
        }
    }
    if radii[0] <= 0.0 || *radii.last().unwrap() >= 1.0 {
        return argument("radius grid must lie inside (0, 1)".to_string());
    }
    Ok(())
}

/// Monte Carlo sweep: pair `replicas` independent field draws against each
/// overlap vector. Returns one row per replica in replica order; the result
/// is independent of the rayon thread count.
pub fn mc_sweep(sampler: &Sampler, lane: u64, replicas: u64, overlaps: &[&[f64]]) -> Vec<Vec<f64>> {
    const CHUNK: u64 = 512;
    let chunks: Vec<u64> = (0..replicas.div_ceil(CHUNK)).collect();
    let mut rows: Vec<Vec<Vec<f64>>> = chunks
        .par_iter()
        .map(|&c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(replicas);
            let mut out = Vec::with_capacity((hi - lo) as usize);
            for rep in lo..hi {
                let field = sampler.sample_lane(lane, rep);
                out.push(
                    overlaps
                        .iter()
                        .map(|ov| sampler.pair(&field, ov))
                        .collect::<Vec<f64>>(),
                );
            }
            out
        })
        .collect();
    let mut flat = Vec::with_capacity(replicas as usize);
    for chunk in rows.drain(..) {
        flat.extend(chunk);
    }
    flat
}

/// Same sweep shape for the closed-form nu pairings on a radius grid:
/// each row holds the path values for one replica.
pub fn mc_nu_paths(
    sampler: &Sampler,
    lane: u64,
    replicas: u64,
    n: usize,
    j: usize,
    radii: &[f64],
) -> Result<Vec<Vec<f64>>> {
    check_grid(radii)?;
    let blocks: Vec<(usize, Vec<f64>)> = radii
        .iter()
        .map(|&r| sampler.nu_block(n, j, r))
        .collect::<Result<_>>()?;
    const CHUNK: u64 = 512;
    let chunks: Vec<u64> = (0..replicas.div_ceil(CHUNK)).collect();
    let rows: Vec<Vec<Vec<f64>>> = chunks
        .par_iter()
        .map(|&c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(replicas);
            let mut out = Vec::with_capacity((hi - lo) as usize);
            for rep in lo..hi {
                let field = sampler.sample_lane(lane, rep);
                out.push(
                    blocks
                        .iter()
                        .map(|(k0, w)| {
                            w.iter()
                                .zip(&field.xi[*k0..k0 + w.len()])
                                .map(|(&a, &x)| a * x)
                                .sum()
                        })
                        .collect::<Vec<f64>>(),
                );
            }
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Exact sampler for the spherical-average process on a fixed radius grid:
/// the Gaussian vector with covariance s(max(r, u)) - s(1), realized through
/// a Cholesky factor.
pub struct ExactRadialSampler {
    pub dim: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
    chol: nalgebra::DMatrix<f64>,
}

impl ExactRadialSampler {
    pub fn new(dim: usize, radii: &[f64], seed: u64) -> Result<Self> {
        if dim < 2 {
            return argument(format!("dimension must be >= 2, got {dim}"));
        }
        check_grid(radii)?;
        let n = radii.len();
        let s1 = scaling_s(dim, 1.0);
        let cov = nalgebra::DMatrix::from_fn(n, n, |a, b| {
            scaling_s(dim, radii[a].max(radii[b])) - s1
        });
        let chol = cov
            .cholesky()
            .ok_or_else(|| crate::error::GffError::Numerics(
                "spherical-average covariance is not positive definite on this grid".to_string(),
            ))?
            .l();
        Ok(ExactRadialSampler {
            dim,
            radii: radii.to_vec(),
            seed,
            chol,
        })
    }

    pub fn covariance(&self, a: usize, b: usize) -> f64 {
        scaling_s(self.dim, self.radii[a].max(self.radii[b])) - scaling_s(self.dim, 1.0)
    }

    pub fn sample(&self, lane: u64, replica: u64) -> RadialPath {
        let mut rng = replica_rng(self.seed, lane, replica);
        let n = self.radii.len();
        let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut values = vec![0.0; n];
        for row in 0..n {
            let mut acc = 0.0;
            for (col, &x) in xi.iter().enumerate().take(row + 1) {
                acc += self.chol[(row, col)] * x;
            }
            values[row] = acc;
        }
        RadialPath {
            radii: self.radii.clone(),
            values,
        }
    }

    /// All replicas as rows, replica order, thread-count independent.
    pub fn sweep(&self, lane: u64, replicas: u64) -> Vec<Vec<f64>> {
        const CHUNK: u64 = 4096;
        let chunks: Vec<u64> = (0..replicas.div_ceil(CHUNK)).collect();
        let rows: Vec<Vec<Vec<f64>>> = chunks
            .par_iter()
            .map(|&c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(replicas);
                (lo..hi).map(|rep| self.sample(lane, rep).values).collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    }
}

/// Replica archive: one row per (replica, mode), exact decimal replay.
pub fn write_replica_csv<W: std::io::Write>(
    basis: &Basis,
    fields: &[FieldSample],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "replica,n,j,i,xi")?;
    for f in fields {
        for (k, m) in basis.modes.iter().enumerate() {
            writeln!(w, "{},{},{},{},{:.17e}", f.replica, m.n, m.j, m.i, f.xi[k])?;
        }
    }
    Ok(())
}
