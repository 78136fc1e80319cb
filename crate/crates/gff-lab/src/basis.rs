//! Dirichlet eigenbasis of the unit ball: modes c_{n,i} f(alpha_{n,i}|z|)
//! psi_{n,j}(z/|z|) with f = J_n in dimension 2 and the spherical j_n in
//! dimension 3, eigenvalue alpha^2. Norm constants make each mode unit in
//! L^2 of Lebesgue measure on the ball; they are computed by radial
//! Gauss-Legendre quadrature (closed forms exist and are pinned in tests).

use std::io::Write;
use std::sync::OnceLock;

use crate::bessel::{bessel_j, bessel_j_zeros, sph_j, sph_j_zeros};
use crate::error::{argument, Result};
use crate::geom::{norm, sphere_area};
use crate::harmonics::{eval_psi, multiplicity};
use crate::quad::gauss_legendre_on;

/// Truncation: degrees 0..=n_max, radial indices 1..=k_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub dim: usize,
    pub n_max: usize,
    pub k_max: usize,
}

impl BasisSpec {
    pub fn new(dim: usize, n_max: usize, k_max: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return argument(format!("eigenbasis supports dimensions 2 and 3, got {dim}"));
        }
        if k_max == 0 {
            return argument("need at least one radial index".to_string());
        }
        Ok(BasisSpec { dim, n_max, k_max })
    }

    /// Default truncation used by the verification suites.
    pub fn default_for_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Self::new(2, 24, 40),
            3 => Self::new(3, 12, 24),
            _ => argument(format!("eigenbasis supports dimensions 2 and 3, got {dim}")),
        }
    }

    pub fn mode_count(&self) -> usize {
        (0..=self.n_max)
            .map(|n| multiplicity(self.dim, n) * self.k_max)
            .sum()
    }
}

/// One eigenfunction of -Laplace with zero boundary values.
#[derive(Clone, Copy, Debug)]
pub struct Mode {
    pub n: usize,
    pub j: usize,
    pub i: usize,
    pub alpha: f64,
    pub lambda: f64,
    pub norm_const: f64,
}

/// Radial profile: J_n for dimension 2, spherical j_n for dimension 3.
pub fn radial_f(dim: usize, n: usize, x: f64) -> f64 {
    match dim {
        2 => bessel_j(n, x),
        3 => sph_j(n, x),
        _ => panic!("radial profile defined for dimensions 2 and 3"),
    }
}

/// i-th positive zero of the order-n radial profile.
pub fn radial_zero(dim: usize, n: usize, i: usize) -> Result<f64> {
    if i == 0 {
        return argument("radial index starts at 1".to_string());
    }
    let zs = match dim {
        2 => bessel_j_zeros(n, i),
        3 => sph_j_zeros(n, i),
        _ => return argument(format!("radial zeros defined for dimensions 2 and 3, got {dim}")),
    };
    Ok(zs[i - 1])
}

pub struct Basis {
    pub spec: BasisSpec,
    pub modes: Vec<Mode>,
    /// zeros[n][i-1] = alpha_{n,i}
    zeros: Vec<Vec<f64>>,
    /// norms[n][i-1] = c_{n,i}
    norms: Vec<Vec<f64>>,
    /// offsets[n] = flat index of mode (n, 1, 1)
    offsets: Vec<usize>,
}

impl Basis {
    pub fn build(spec: BasisSpec) -> Result<Basis> {
        let BasisSpec { dim, n_max, k_max } = spec;
        let mut zeros = Vec::with_capacity(n_max + 1);
        let mut norms = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let zs = match dim {
                2 => bessel_j_zeros(n, k_max),
                3 => sph_j_zeros(n, k_max),
                _ => unreachable!(),
            };
            let cs: Vec<f64> = zs
                .iter()
                .map(|&a| norm_const_quadrature(dim, n, a))
                .collect();
            zeros.push(zs);
            norms.push(cs);
        }
        let mut offsets = Vec::with_capacity(n_max + 1);
        let mut modes = Vec::with_capacity(spec.mode_count());
        for n in 0..=n_max {
            offsets.push(modes.len());
            for j in 1..=multiplicity(dim, n) {
                for i in 1..=k_max {
                    let alpha = zeros[n][i - 1];
                    modes.push(Mode {
                        n,
                        j,
                        i,
                        alpha,
                        lambda: alpha * alpha,
                        norm_const: norms[n][i - 1],
                    });
                }
            }
        }
        Ok(Basis {
            spec,
            modes,
            zeros,
            norms,
            offsets,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn alpha(&self, n: usize, i: usize) -> f64 {
        self.zeros[n][i - 1]
    }

    pub fn norm_const(&self, n: usize, i: usize) -> f64 {
        self.norms[n][i - 1]
    }

    /// Flat index of mode (n, j, i) in the build order n, then j, then i.
    pub fn mode_index(&self, n: usize, j: usize, i: usize) -> usize {
        debug_assert!(n <= self.spec.n_max);
        debug_assert!(j >= 1 && j <= multiplicity(self.spec.dim, n));
        debug_assert!(i >= 1 && i <= self.spec.k_max);
        self.offsets[n] + (j - 1) * self.spec.k_max + (i - 1)
    }

    /// c_{n,i} f(alpha_{n,i} r), the radial factor shared by all j.
    pub fn radial_part(&self, n: usize, i: usize, r: f64) -> f64 {
        self.norms[n][i - 1] * radial_f(self.spec.dim, n, self.alpha(n, i) * r)
    }

    /// Evaluate the k-th mode at a point (the formula extends smoothly past
    /// the boundary; membership checks belong to the caller).
    pub fn eval_mode(&self, k: usize, z: &[f64]) -> Result<f64> {
        let m = &self.modes[k];
        let r = norm(z);
        if r == 0.0 {
            // psi is constant 1 only for n = 0; higher degrees vanish with r^n
            return Ok(if m.n == 0 {
                m.norm_const * radial_f(self.spec.dim, 0, 0.0)
            } else {
                0.0
            });
        }
        let theta: Vec<f64> = z.iter().map(|c| c / r).collect();
        Ok(m.norm_const
            * radial_f(self.spec.dim, m.n, m.alpha * r)
            * eval_psi(self.spec.dim, m.n, m.j, &theta)?)
    }

    /// Evaluate every mode at a point in one pass, sharing the radial factor
    /// across the multiplicity block and the angular factor across radial
    /// indices. Output is in mode order.
    pub fn eval_all(&self, z: &[f64], out: &mut [f64]) -> Result<()> {
        if out.len() != self.len() {
            return crate::error::argument("output buffer has the wrong length".to_string());
        }
        let dim = self.spec.dim;
        let r = norm(z);
        if r == 0.0 {
            out.fill(0.0);
            for i in 1..=self.spec.k_max {
                out[self.mode_index(0, 1, i)] = self.norms[0][i - 1] * radial_f(dim, 0, 0.0);
            }
            return Ok(());
        }
        let theta: Vec<f64> = z.iter().map(|c| c / r).collect();
        let mut radial = vec![0.0; self.spec.k_max];
        for n in 0..=self.spec.n_max {
            for (i, dst) in radial.iter_mut().enumerate() {
                *dst = self.norms[n][i] * radial_f(dim, n, self.zeros[n][i] * r);
            }
            for j in 1..=multiplicity(dim, n) {
                let psi = eval_psi(dim, n, j, &theta)?;
                let k0 = self.mode_index(n, j, 1);
                for (i, &rad) in radial.iter().enumerate() {
                    out[k0 + i] = rad * psi;
                }
            }
        }
        Ok(())
    }

    /// CSV manifest, one row per mode.
    pub fn write_manifest<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,j,i,alpha,lambda,norm_const")?;
        for m in &self.modes {
            writeln!(
                w,
                "{},{},{},{:.16e},{:.16e},{:.16e}",
                m.n, m.j, m.i, m.alpha, m.lambda, m.norm_const
            )?;
        }
        Ok(())
    }
}

/// The default-truncation basis for a dimension, built once per process.
pub fn default_basis(dim: usize) -> Result<&'static Basis> {
    static B2: OnceLock<Basis> = OnceLock::new();
    static B3: OnceLock<Basis> = OnceLock::new();
    let cell = match dim {
        2 => &B2,
        3 => &B3,
        _ => return argument(format!("eigenbasis supports dimensions 2 and 3, got {dim}")),
    };
    if cell.get().is_none() {
        let built = Basis::build(BasisSpec::default_for_dim(dim)?)?;
        let _ = cell.set(built);
    }
    Ok(cell.get().expect("just initialized"))
}

/// Norm constant by radial quadrature: the mode has unit L^2(ball) norm when
/// c^{-2} = area(S^{d-1}) * int_0^1 f(alpha r)^2 r^{d-1} dr, the surface
/// factor arising because psi has unit norm against the probability measure.
fn norm_const_quadrature(dim: usize, n: usize, alpha: f64) -> f64 {
    let nodes = ((1.2 * alpha).ceil() as usize).max(64);
    let (xs, ws) = gauss_legendre_on(0.0, 1.0, nodes);
    let mut acc = 0.0;
    for (&r, &w) in xs.iter().zip(&ws) {
        let f = radial_f(dim, n, alpha * r);
        acc += w * f * f * r.powi(dim as i32 - 1);
    }
    1.0 / (sphere_area(dim) * acc).sqrt()
}

/// Summary of the deterministic basis checks.
#[derive(Clone, Copy, Debug)]
pub struct BasisAudit {
    pub psi_gram_dev: f64,
    pub mode_gram_dev: f64,
    pub max_eigen_residual: f64,
    pub max_boundary_residual: f64,
}

impl BasisAudit {
    pub fn passes(&self) -> bool {
        self.psi_gram_dev < 1e-10
            && self.mode_gram_dev < 1e-8
            && self.max_eigen_residual < 1e-3
            && self.max_boundary_residual < 1e-10
    }
}

/// Deterministic integrity checks: angular Gram, factorized volume Gram over
/// a low-degree block, eigen-equation residuals through a fourth-order
/// stencil, and the Dirichlet boundary condition.
pub fn audit(basis: &Basis) -> Result<BasisAudit> {
    let dim = basis.spec.dim;
    let n_cap = basis.spec.n_max.min(if dim == 2 { 16 } else { 8 });

    // angular Gram against a rule that resolves products of degree 2 n_cap
    let rule = crate::sphere::SphereRule::new(dim, 2 * n_cap + 8)?;
    let mut labels = Vec::new();
    for n in 0..=n_cap {
        for j in 1..=multiplicity(dim, n) {
            labels.push((n, j));
        }
    }
    let mut psi_dev: f64 = 0.0;
    let table: Vec<Vec<f64>> = labels
        .iter()
        .map(|&(n, j)| {
            rule.nodes
                .iter()
                .map(|u| eval_psi(dim, n, j, u).unwrap())
                .collect()
        })
        .collect();
    for (a, ta) in table.iter().enumerate() {
        for (b, tb) in table.iter().enumerate().skip(a) {
            let g: f64 = rule
                .weights
                .iter()
                .zip(ta.iter().zip(tb))
                .map(|(&w, (&x, &y))| w * x * y)
                .sum();
            let want = if a == b { 1.0 } else { 0.0 };
            psi_dev = psi_dev.max((g - want).abs());
        }
    }

    // volume Gram on the block n <= min(8, n_max), i <= min(8, k_max),
    // factorized into the angular Gram above and radial cross integrals
    let gram_n = basis.spec.n_max.min(8);
    let gram_i = basis.spec.k_max.min(8);
    let mut mode_dev: f64 = 0.0;
    let (xs, ws) = gauss_legendre_on(0.0, 1.0, 160);
    for n in 0..=gram_n {
        for i1 in 1..=gram_i {
            for i2 in i1..=gram_i {
                let (a1, a2) = (basis.alpha(n, i1), basis.alpha(n, i2));
                let (c1, c2) = (basis.norm_const(n, i1), basis.norm_const(n, i2));
                let mut acc = 0.0;
                for (&r, &w) in xs.iter().zip(&ws) {
                    acc += w
                        * radial_f(dim, n, a1 * r)
                        * radial_f(dim, n, a2 * r)
                        * r.powi(dim as i32 - 1);
                }
                let g = sphere_area(dim) * c1 * c2 * acc;
                let want = if i1 == i2 { 1.0 } else { 0.0 };
                mode_dev = mode_dev.max((g - want).abs());
            }
        }
    }
    // cross-degree blocks vanish with the angular Gram; bound their
    // contribution by the worst angular deviation times the radial scale
    mode_dev = mode_dev.max(psi_dev);

    // eigen-equation and boundary residuals, one point per (n, i), probing
    // near an antinode of the radial factor
    let h = 1e-3;
    let mut eig_dev: f64 = 0.0;
    let mut bc_dev: f64 = 0.0;
    for n in 0..=basis.spec.n_max {
        for i in 1..=basis.spec.k_max {
            let alpha = basis.alpha(n, i);
            bc_dev = bc_dev.max(radial_f(dim, n, alpha).abs());
            let j = 1 + (n + i) % multiplicity(dim, n);
            let k = basis.mode_index(n, j, i);
            let mut best_r = 0.5;
            let mut best = 0.0;
            for t in 1..=40 {
                let r = 0.05 + 0.85 * t as f64 / 40.0;
                let v = basis.radial_part(n, i, r).abs();
                if v > best {
                    best = v;
                    best_r = r;
                }
            }
            let dir: Vec<f64> = {
                let raw: Vec<f64> = if dim == 2 {
                    vec![0.92387953251, 0.38268343236]
                } else {
                    vec![0.55, 0.62, 0.5586591]
                };
                let s = norm(&raw);
                raw.iter().map(|c| c / s).collect()
            };
            let psi = eval_psi(dim, n, j, &dir)?;
            // steer off nodal directions: rotate within the plane span
            let z: Vec<f64> = dir.iter().map(|c| c * best_r).collect();
            let val = basis.eval_mode(k, &z)?;
            if psi.abs() < 1e-3 || val.abs() < 1e-12 {
                continue;
            }
            let lap = crate::fd::laplacian_fd4(|p| basis.eval_mode(k, p).unwrap(), &z, h);
            let m = &basis.modes[k];
            eig_dev = eig_dev.max((lap + m.lambda * val).abs() / (m.lambda * val.abs()));
        }
    }

    Ok(BasisAudit {
        psi_gram_dev: psi_dev,
        mode_gram_dev: mode_dev,
        max_eigen_residual: eig_dev,
        max_boundary_residual: bc_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphereRule;

    // closed forms valid exactly at the zeros: 1/(sqrt(pi) |J_{n+1}(alpha)|)
    // in dimension 2 and 1/(sqrt(2 pi) |j_{n+1}(alpha)|) in dimension 3
    fn norm_const_closed(dim: usize, n: usize, alpha: f64) -> f64 {
        match dim {
            2 => 1.0 / (std::f64::consts::PI.sqrt() * bessel_j(n + 1, alpha).abs()),
            3 => 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sph_j(n + 1, alpha).abs()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn norm_constants_match_closed_form_and_frozen_values() {
        // (dim, n, i, alpha, c) pinned from an independent evaluation
        let cases: &[(usize, usize, usize, f64, f64)] = &[
            (2, 0, 1, 2.4048255576957724e+00, 1.0867616361312724e+00),
            (2, 1, 1, 3.8317059702075125e+00, 1.4008104828035421e+00),
            (2, 3, 2, 9.7610231299816697e+00, 2.2620352505379930e+00),
            (2, 24, 40, 1.6078366078359886e+02, 9.0167752356216155e+00),
            (3, 0, 1, 3.1415926535897931e+00, 1.2533141373155003e+00),
            (3, 1, 1, 4.4934094579090642e+00, 1.8364664977815093e+00),
            (3, 2, 3, 1.2322940970566583e+01, 4.9654155253206795e+00),
            (3, 12, 24, 9.3411563497683261e+01, 3.7434239634367600e+01),
        ];
        for &(dim, n, i, alpha, c) in cases {
            let a = radial_zero(dim, n, i).unwrap();
            assert!((a - alpha).abs() < 1e-12 * alpha, "zero {dim} {n} {i}");
            let cq = norm_const_quadrature(dim, n, a);
            let cc = norm_const_closed(dim, n, a);
            assert!(
                (cq - c).abs() < 1e-10 * c,
                "quadrature {dim} {n} {i}: {cq:.16e} vs {c:.16e}"
            );
            assert!((cc - c).abs() < 1e-10 * c, "closed {dim} {n} {i}");
        }
    }

    #[test]
    fn spec_counting_and_defaults() {
        let s2 = BasisSpec::default_for_dim(2).unwrap();
        assert_eq!((s2.n_max, s2.k_max), (24, 40));
        assert_eq!(s2.mode_count(), (1 + 2 * 24) * 40);
        let s3 = BasisSpec::default_for_dim(3).unwrap();
        assert_eq!((s3.n_max, s3.k_max), (12, 24));
        assert_eq!(s3.mode_count(), 169 * 24);
        assert!(BasisSpec::new(4, 1, 1).is_err());
        assert!(BasisSpec::new(2, 1, 0).is_err());
    }

    #[test]
    fn mode_ordering_and_lookup() {
        let basis = Basis::build(BasisSpec::new(2, 3, 5).unwrap()).unwrap();
        assert_eq!(basis.len(), (1 + 2 * 3) * 5);
        let mut seen = 0;
        for n in 0..=3 {
            for j in 1..=multiplicity(2, n) {
                for i in 1..=5 {
                    let k = basis.mode_index(n, j, i);
                    assert_eq!(k, seen);
                    let m = &basis.modes[k];
                    assert_eq!((m.n, m.j, m.i), (n, j, i));
                    assert!((m.lambda - m.alpha * m.alpha).abs() < 1e-12);
                    seen += 1;
                }
            }
        }
    }

    #[test]
    fn small_basis_audit_passes() {
        for dim in [2usize, 3] {
            let basis = Basis::build(BasisSpec::new(dim, 6, 6).unwrap()).unwrap();
            let audit = audit(&basis).unwrap();
            assert!(
                audit.passes(),
                "dim {dim}: {audit:?}"
            );
        }
    }

    #[test]
    fn direct_volume_gram_on_first_modes() {
        // genuine product-rule volume quadrature, no factorization shortcuts
        let basis = Basis::build(BasisSpec::new(2, 4, 3).unwrap()).unwrap();
        let rule = SphereRule::new(2, 16).unwrap();
        let (rs, ws) = gauss_legendre_on(0.0, 1.0, 80);
        let count = basis.len().min(27);
        let mut table = vec![vec![0.0; rs.len() * rule.nodes.len()]; count];
        let mut wvol = vec![0.0; rs.len() * rule.nodes.len()];
        for (a, (&r, &wr)) in rs.iter().zip(&ws).enumerate() {
            for (b, (u, &wu)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                let z: Vec<f64> = u.iter().map(|c| c * r).collect();
                let idx = a * rule.nodes.len() + b;
                wvol[idx] = wr * wu * sphere_area(2) * r;
                for (k, row) in table.iter_mut().enumerate() {
                    row[idx] = basis.eval_mode(k, &z).unwrap();
                }
            }
        }
        let mut worst: f64 = 0.0;
        for k1 in 0..count {
            for k2 in k1..count {
                let g: f64 = wvol
                    .iter()
                    .zip(table[k1].iter().zip(&table[k2]))
                    .map(|(&w, (&x, &y))| w * x * y)
                    .sum();
                let want = if k1 == k2 { 1.0 } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
        assert!(worst < 1e-8, "worst volume Gram deviation {worst:.3e}");
    }

    #[test]
    fn boundary_and_center_values() {
        let basis = Basis::build(BasisSpec::new(3, 2, 2).unwrap()).unwrap();
        for (k, m) in basis.modes.iter().enumerate() {
            let u = [0.6, 0.64, 0.48];
            let z: Vec<f64> = u.iter().map(|c| c / norm(&u)).collect();
            assert!(basis.eval_mode(k, &z).unwrap().abs() < 1e-10, "mode {k}");
            let at0 = basis.eval_mode(k, &[0.0, 0.0, 0.0]).unwrap();
            if m.n == 0 {
                // j_0(0) = 1
                assert!((at0 - m.norm_const).abs() < 1e-14);
            } else {
                assert_eq!(at0, 0.0);
            }
        }
    }

    #[test]
    fn radial_pairing_closed_form() {
        // pairing a mode against psi on the sphere of radius r returns the
        // radial factor, by angular orthonormality
        let basis = Basis::build(BasisSpec::new(2, 4, 4).unwrap()).unwrap();
        let r = 0.55;
        for &(n, j, i) in &[(0usize, 1usize, 1usize), (2, 2, 3), (4, 1, 2)] {
            let k = basis.mode_index(n, j, i);
            let got =
                crate::harmonics::nu_pair(2, n, j, r, |z| basis.eval_mode(k, z).unwrap()).unwrap();
            let want = basis.radial_part(n, i, r);
            assert!((got - want).abs() < 1e-10, "({n},{j},{i}): {got} vs {want}");
        }
        // mismatched angular indices pair to zero
        let k = basis.mode_index(3, 1, 2);
        let got =
            crate::harmonics::nu_pair(2, 2, 1, r, |z| basis.eval_mode(k, z).unwrap()).unwrap();
        assert!(got.abs() < 1e-12);
    }

    #[test]
    fn fused_evaluation_matches_per_mode() {
        for dim in [2usize, 3] {
            let basis = Basis::build(BasisSpec::new(dim, 5, 4).unwrap()).unwrap();
            let mut z = vec![0.0; dim];
            z[0] = 0.41;
            z[dim - 1] = -0.23;
            let mut all = vec![0.0; basis.len()];
            basis.eval_all(&z, &mut all).unwrap();
            for k in 0..basis.len() {
                let one = basis.eval_mode(k, &z).unwrap();
                assert!((all[k] - one).abs() < 1e-14, "dim {dim} mode {k}");
            }
            // origin short-circuit
            basis.eval_all(&vec![0.0; dim], &mut all).unwrap();
            for k in 0..basis.len() {
                let one = basis.eval_mode(k, &vec![0.0; dim]).unwrap();
                assert_eq!(all[k], one, "dim {dim} mode {k}");
            }
            let mut short = vec![0.0; 3];
            assert!(basis.eval_all(&z, &mut short).is_err());
        }
    }

    #[test]
    fn manifest_format() {
        let basis = Basis::build(BasisSpec::new(2, 1, 2).unwrap()).unwrap();
        let mut buf = Vec::new();
        basis.write_manifest(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,j,i,alpha,lambda,norm_const");
        assert_eq!(lines.len(), 1 + basis.len());
        assert!(lines[1].starts_with("0,1,1,2.4048255576957"));
    }
}
