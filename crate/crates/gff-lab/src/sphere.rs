//! Quadrature rules on the unit sphere against the uniform probability
//! measure: equally spaced angles in dimension 2, a Gauss-Legendre cross
//! uniform-azimuth product rule in dimension 3.

use std::io::Write;
use std::path::Path;

use crate::error::{argument, Result};
use crate::geom::{unit2, unit3};
use crate::quad::gauss_legendre;

#[derive(Clone, Debug)]
pub struct SphereRule {
    pub dim: usize,
    pub order: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// A rule whose weights sum to one and which integrates products of
    /// spherical harmonics exactly up to total degree 2 * order + 1.
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        match dim {
            2 => {
                let m = 2 * order + 2;
                let nodes = (0..m)
                    .map(|k| unit2(2.0 * std::f64::consts::PI * k as f64 / m as f64))
                    .collect();
                Ok(SphereRule {
                    dim,
                    order,
                    nodes,
                    weights: vec![1.0 / m as f64; m],
                })
            }
            3 => {
                let l = order + 1;
                let m = 2 * order + 2;
                let (xs, ws) = gauss_legendre(l);
                let mut nodes = Vec::with_capacity(l * m);
                let mut weights = Vec::with_capacity(l * m);
                for (x, w) in xs.iter().zip(&ws) {
                    let polar = x.acos();
                    for k in 0..m {
                        let az = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                        nodes.push(unit3(polar, az));
                        weights.push(w / (2.0 * m as f64));
                    }
                }
                // Remove the few ulps of Gauss-Legendre round-off so the rule
                // has exactly unit mass.
                let total: f64 = weights.iter().sum();
                for w in &mut weights {
                    *w /= total;
                }
                Ok(SphereRule {
                    dim,
                    order,
                    nodes,
                    weights,
                })
            }
            d => argument(format!("sphere rules exist for dimensions 2 and 3, got {d}")),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Mean of f over the sphere (uniform probability measure).
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .fold(0.0, |a, b| a + b)
    }

    /// One row per node: coordinates then weight.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        let coords: Vec<String> = (0..self.dim).map(|k| format!("x{k}")).collect();
        writeln!(f, "{},weight", coords.join(","))?;
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            let row: Vec<String> = node.iter().map(|c| format!("{c:.17e}")).collect();
            writeln!(f, "{},{w:.17e}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::norm;

    #[test]
    fn weights_sum_to_one_and_nodes_are_unit() {
        for dim in [2usize, 3] {
            for order in [1usize, 4, 16, 56] {
                let rule = SphereRule::new(dim, order).unwrap();
                let s: f64 = rule.weights.iter().sum();
                assert!((s - 1.0).abs() < 1e-14, "dim {dim} order {order}: sum {s}");
                for node in &rule.nodes {
                    assert!((norm(node) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn kills_low_degree_harmonics_d2() {
        let rule = SphereRule::new(2, 12).unwrap();
        for n in 1..=12 {
            let c = rule.integrate(|x| (n as f64 * x[1].atan2(x[0])).cos());
            let s = rule.integrate(|x| (n as f64 * x[1].atan2(x[0])).sin());
            assert!(c.abs() < 1e-10 && s.abs() < 1e-10, "degree {n}: {c}, {s}");
        }
        // and resolves products: <cos(n.), cos(n.)> = 1/2
        for n in 1..=12 {
            let p = rule.integrate(|x| (n as f64 * x[1].atan2(x[0])).cos().powi(2));
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kills_low_degree_harmonics_d3() {
        let rule = SphereRule::new(3, 8).unwrap();
        for f in [
            |x: &[f64]| x[2],
            |x: &[f64]| x[0] * x[1],
            |x: &[f64]| 3.0 * x[2] * x[2] - 1.0,
            |x: &[f64]| x[0] * (5.0 * x[2] * x[2] - 1.0),
        ] {
            let v = rule.integrate(f);
            assert!(v.abs() < 1e-10, "harmonic mean {v}");
        }
    }

    #[test]
    fn moments_on_s2() {
        let rule = SphereRule::new(3, 6).unwrap();
        let z2 = rule.integrate(|x| x[2] * x[2]);
        let z4 = rule.integrate(|x| x[2].powi(4));
        let x2y2 = rule.integrate(|x| x[0] * x[0] * x[1] * x[1]);
        assert!((z2 - 1.0 / 3.0).abs() < 1e-13);
        assert!((z4 - 1.0 / 5.0).abs() < 1e-13);
        assert!((x2y2 - 1.0 / 15.0).abs() < 1e-13);
    }

    #[test]
    fn csv_round_trip_shape() {
        let rule = SphereRule::new(2, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rule.csv");
        rule.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), rule.len() + 1);
        assert_eq!(lines[0], "x0,x1,weight");
    }
}
