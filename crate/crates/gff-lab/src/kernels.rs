//! Exact zero-boundary kernels on balls: the radial scaling function, Green's
//! functions by the reflection construction, the harmonic difference kernel,
//! the Wick four-point function and the Poisson kernel.

use crate::error::{argument, geometry, Result};
use crate::geom::{dist, dot, norm, Ball};

/// Separation below which a pair of points counts as coincident,
/// relative to the ball radius.
pub const COINCIDENT_REL: f64 = 1e-14;

/// Radial scaling function: -ln r in dimension 2, r^{2-d} otherwise.
pub fn scaling_s(dim: usize, r: f64) -> f64 {
    debug_assert!(dim >= 2);
    debug_assert!(r > 0.0);
    if dim == 2 {
        -r.ln()
    } else {
        r.powi(2 - dim as i32)
    }
}

/// Factor linking the eigenfunction expansion of the inverse Laplacian to
/// the Green's function in the s-normalization used here: the fundamental
/// solution of -Laplace is s(r) / kappa with kappa = 2 pi in dimension 2 and
/// (d - 2) area(S^{d-1}) in dimension d >= 3, so G = kappa * sum e e / lambda.
pub fn green_normalization(dim: usize) -> f64 {
    if dim == 2 {
        2.0 * std::f64::consts::PI
    } else {
        (dim as f64 - 2.0) * crate::geom::sphere_area(dim)
    }
}

/// Inversion through the unit sphere, x / |x|^2.
pub fn image_point(x: &[f64]) -> Result<Vec<f64>> {
    let n2 = dot(x, x);
    if n2 < 1e-24 {
        return argument("image point undefined at the origin".to_string());
    }
    Ok(x.iter().map(|a| a / n2).collect())
}

/// |x| * |y - x/|x|^2|, the reflected separation, computed in a form that is
/// symmetric in x, y and well defined at the origin:
/// sqrt(|x|^2 |y|^2 - 2 x.y + 1).
fn reflected_separation(x: &[f64], y: &[f64]) -> f64 {
    let v = dot(x, x) * dot(y, y) - 2.0 * dot(x, y) + 1.0;
    v.max(0.0).sqrt()
}

fn check_in_closed_unit(x: &[f64]) -> Result<()> {
    if norm(x) > 1.0 + 1e-12 {
        return geometry(format!("point lies outside the closed unit ball: |x| = {}", norm(x)));
    }
    Ok(())
}

/// Green's function of the unit ball with zero boundary values,
/// s(|x - y|) - s(|x| |y - x/|x|^2|).
pub fn green_unit_ball(dim: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != dim || y.len() != dim {
        return argument(format!(
            "expected {dim}-dimensional points, got {} and {}",
            x.len(),
            y.len()
        ));
    }
    check_in_closed_unit(x)?;
    check_in_closed_unit(y)?;
    let sep = dist(x, y);
    if sep < COINCIDENT_REL {
        return argument("green function diverges on the diagonal".to_string());
    }
    Ok(scaling_s(dim, sep) - scaling_s(dim, reflected_separation(x, y)))
}

fn ball_scale(ball: &Ball) -> f64 {
    let dim = ball.dim();
    if dim == 2 {
        1.0
    } else {
        ball.radius.powi(2 - dim as i32)
    }
}

/// Green's function of an arbitrary ball: map to the unit ball and scale by
/// radius^{2-d} (no prefactor in dimension 2).
pub fn green_ball(ball: &Ball, x: &[f64], y: &[f64]) -> Result<f64> {
    if dist(x, y) < COINCIDENT_REL * ball.radius {
        return argument(format!(
            "point pair closer than {:.1e} * radius",
            COINCIDENT_REL
        ));
    }
    let ux = ball.to_unit(x);
    let uy = ball.to_unit(y);
    Ok(ball_scale(ball) * green_unit_ball(ball.dim(), &ux, &uy)?)
}

/// The diagonal-safe remainder of the Green's function: green_ball minus the
/// pure scaling singularity s(|x - y| / radius) (times the dimension scale).
/// Finite for x = y strictly inside the ball.
pub fn green_regularized(ball: &Ball, x: &[f64], y: &[f64]) -> Result<f64> {
    let ux = ball.to_unit(x);
    let uy = ball.to_unit(y);
    check_in_closed_unit(&ux)?;
    check_in_closed_unit(&uy)?;
    let rs = reflected_separation(&ux, &uy);
    if rs < COINCIDENT_REL {
        return argument("regularized kernel diverges at coincident boundary points".to_string());
    }
    Ok(-ball_scale(ball) * scaling_s(ball.dim(), rs))
}

/// Covariance of the harmonic interpolation between two nested balls:
/// H = G_outer - G_inner, finite on the diagonal. Points must lie in the
/// closed inner ball; the inner ball must sit strictly inside the outer one.
pub fn harmonic_diff_kernel(outer: &Ball, inner: &Ball, x: &[f64], y: &[f64]) -> Result<f64> {
    if !inner.strictly_inside(outer) {
        return geometry("inner ball must lie strictly inside the outer ball".to_string());
    }
    // The singular parts cancel analytically: in dimension 2 they differ by
    // the constant ln(r_outer / r_inner), in higher dimension by nothing.
    let dim = outer.dim();
    let sdiff = if dim == 2 {
        (outer.radius / inner.radius).ln()
    } else {
        0.0
    };
    Ok(sdiff + green_regularized(outer, x, y)? - green_regularized(inner, x, y)?)
}

/// Wick (pair-sum) four-point function: G12 G34 + G13 G24 + G14 G23.
pub fn wick_g4(ball: &Ball, z: &[&[f64]; 4]) -> Result<f64> {
    for a in 0..4 {
        for b in (a + 1)..4 {
            if dist(z[a], z[b]) < COINCIDENT_REL * ball.radius {
                return argument(format!("four-point arguments {a} and {b} coincide"));
            }
        }
    }
    let g = |a: usize, b: usize| green_ball(ball, z[a], z[b]);
    Ok(g(0, 1)? * g(2, 3)? + g(0, 2)? * g(1, 3)? + g(0, 3)? * g(1, 2)?)
}

/// Poisson kernel of a ball as a density against the uniform probability
/// measure on the boundary sphere: r^{d-2} (r^2 - |z - a|^2) / |z - theta|^d.
/// Equals 1 when z is the center.
pub fn poisson_kernel(ball: &Ball, z: &[f64], theta: &[f64]) -> Result<f64> {
    let dim = ball.dim();
    let rho = dist(z, &ball.center);
    if rho >= ball.radius {
        return geometry("poisson kernel requires z strictly inside the ball".to_string());
    }
    let on_boundary = (dist(theta, &ball.center) - ball.radius).abs() <= 1e-9 * ball.radius;
    if !on_boundary {
        return geometry("theta must lie on the boundary sphere".to_string());
    }
    let r = ball.radius;
    let num = r.powi(dim as i32 - 2) * (r * r - rho * rho);
    Ok(num / dist(z, theta).powi(dim as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::laplacian_fd4;
    use crate::sphere::SphereRule;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn scaling_s_anchors() {
        assert!((scaling_s(2, 0.5) - LN2).abs() < 1e-15);
        assert!((scaling_s(2, 1.0)).abs() < 1e-15);
        assert!((scaling_s(3, 0.5) - 2.0).abs() < 1e-15);
        assert!((scaling_s(3, 1.0) - 1.0).abs() < 1e-15);
        assert!((scaling_s(4, 0.5) - 4.0).abs() < 1e-15);
        // strictly decreasing in r
        for dim in [2usize, 3, 4] {
            let mut prev = f64::INFINITY;
            for k in 1..40 {
                let v = scaling_s(dim, k as f64 * 0.05);
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn scaling_s_composition_rules() {
        // dimension 2 turns products into sums, higher dimensions into products
        for (u, v) in [(0.3, 0.7), (0.9, 0.2), (0.5, 0.5)] {
            assert!((scaling_s(2, u * v) - (scaling_s(2, u) + scaling_s(2, v))).abs() < 1e-12);
            assert!((scaling_s(3, u * v) - scaling_s(3, u) * scaling_s(3, v)).abs() < 1e-12);
        }
    }

    #[test]
    fn image_point_inverts_norm() {
        let x = [0.3, -0.4];
        let img = image_point(&x).unwrap();
        assert!((norm(&img) - 2.0).abs() < 1e-14);
        assert!(image_point(&[0.0, 0.0]).is_err());
        // x and its image are parallel
        assert!((img[0] * x[1] - img[1] * x[0]).abs() < 1e-15);
    }

    #[test]
    fn green_center_anchors() {
        let g2 = green_unit_ball(2, &[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert!((g2 - LN2).abs() < 1e-14, "{g2}");
        let g3 = green_unit_ball(3, &[0.0, 0.0, 0.0], &[0.5, 0.0, 0.0]).unwrap();
        assert!((g3 - 1.0).abs() < 1e-14, "{g3}");
    }

    #[test]
    fn green_symmetry_and_positivity() {
        let pts2 = [
            (vec![0.1, 0.2], vec![-0.3, 0.4]),
            (vec![0.7, 0.1], vec![0.65, 0.2]),
            (vec![0.0, 0.0], vec![0.0, 0.9]),
        ];
        for (x, y) in pts2 {
            let a = green_unit_ball(2, &x, &y).unwrap();
            let b = green_unit_ball(2, &y, &x).unwrap();
            assert!((a - b).abs() < 1e-13 * a.abs().max(1.0));
            assert!(a > 0.0);
        }
        let x = vec![0.2, -0.1, 0.3];
        let y = vec![-0.4, 0.2, 0.1];
        let a = green_unit_ball(3, &x, &y).unwrap();
        let b = green_unit_ball(3, &y, &x).unwrap();
        assert!((a - b).abs() < 1e-13 * a.abs());
        assert!(a > 0.0);
    }

    #[test]
    fn green_vanishes_on_boundary() {
        let y = [0.2, 0.1];
        let xb = [0.6, 0.8]; // exactly on the unit circle
        let g = green_unit_ball(2, &xb, &y).unwrap();
        assert!(g.abs() < 1e-14, "boundary value {g}");
        // monotone decay along a ray toward the boundary
        let mut prev = f64::INFINITY;
        for t in [0.5, 0.9, 0.99, 0.999, 0.999999] {
            let x = [0.6 * t, 0.8 * t];
            let g = green_unit_ball(2, &x, &y).unwrap();
            assert!(g < prev && g > 0.0);
            prev = g;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn green_rejects_bad_points() {
        assert!(green_unit_ball(2, &[1.2, 0.0], &[0.0, 0.0]).is_err());
        assert!(green_unit_ball(2, &[0.1, 0.1], &[0.1, 0.1]).is_err());
        let ball = Ball::new(vec![0.0, 0.0], 2.0).unwrap();
        let x = [0.3, 0.4];
        let y = [0.3 + 1e-15, 0.4];
        assert!(green_ball(&ball, &x, &y).is_err());
    }

    #[test]
    fn green_scaling_covariance() {
        // G_{a + rB}(a + r x, a + r y) = r^{2-d} G_B(x, y)
        let x = [0.3, -0.2];
        let y = [-0.1, 0.5];
        let unit = green_unit_ball(2, &x, &y).unwrap();
        for (cx, cy, r) in [(0.0, 0.0, 0.5), (1.0, -2.0, 0.25), (0.3, 0.1, 3.0)] {
            let ball = Ball::new(vec![cx, cy], r).unwrap();
            let gx = [cx + r * x[0], cy + r * x[1]];
            let gy = [cx + r * y[0], cy + r * y[1]];
            let g = green_ball(&ball, &gx, &gy).unwrap();
            assert!((g - unit).abs() < 1e-12, "d=2 scale invariance: {g} vs {unit}");
        }
        let x3 = [0.3, -0.2, 0.1];
        let y3 = [-0.1, 0.5, 0.2];
        let unit3 = green_unit_ball(3, &x3, &y3).unwrap();
        let ball = Ball::new(vec![0.5, 0.0, -0.25], 0.5).unwrap();
        let gx: Vec<f64> = (0..3).map(|k| ball.center[k] + 0.5 * x3[k]).collect();
        let gy: Vec<f64> = (0..3).map(|k| ball.center[k] + 0.5 * y3[k]).collect();
        let g = green_ball(&ball, &gx, &gy).unwrap();
        assert!((g - 0.5_f64.powi(-1) * unit3).abs() < 1e-12 * unit3.abs());
    }

    #[test]
    fn green_harmonic_away_from_pole() {
        let y2 = vec![0.1, -0.15];
        let f2 = |x: &[f64]| green_unit_ball(2, x, &y2).unwrap();
        for x in [[0.5, 0.3], [-0.2, 0.6], [0.0, 0.45]] {
            let lap = laplacian_fd4(f2, &x, 1e-3);
            assert!(lap.abs() < 1e-8, "d=2 laplacian {lap}");
        }
        let y3 = vec![0.1, -0.15, 0.2];
        let f3 = |x: &[f64]| green_unit_ball(3, x, &y3).unwrap();
        let lap = laplacian_fd4(f3, &[0.45, 0.2, -0.3], 1e-3);
        assert!(lap.abs() < 1e-7, "d=3 laplacian {lap}");
    }

    #[test]
    fn regularized_part_anchors_and_identity() {
        let unit2 = Ball::unit(2);
        let unit3 = Ball::unit(3);
        let z2 = [0.0, 0.0];
        let z3 = [0.0, 0.0, 0.0];
        assert!(green_regularized(&unit2, &z2, &z2).unwrap().abs() < 1e-15);
        assert!((green_regularized(&unit3, &z3, &z3).unwrap() + 1.0).abs() < 1e-15);
        // G = scale * s(|x-y|/r) + regularized, at separated points
        let ball = Ball::new(vec![0.2, -0.1], 0.8).unwrap();
        let x = [0.5, 0.1];
        let y = [0.0, -0.3];
        let g = green_ball(&ball, &x, &y).unwrap();
        let s_part = scaling_s(2, dist(&x, &y) / ball.radius);
        let reg = green_regularized(&ball, &x, &y).unwrap();
        assert!((g - (s_part + reg)).abs() < 1e-13);
        let ball3 = Ball::new(vec![0.0, 0.0, 0.1], 0.7).unwrap();
        let x3 = [0.2, 0.0, 0.3];
        let y3 = [-0.1, 0.25, 0.0];
        let g3 = green_ball(&ball3, &x3, &y3).unwrap();
        let scale = 0.7_f64.powi(-1);
        let s3 = scale * scaling_s(3, dist(&x3, &y3) / ball3.radius);
        let reg3 = green_regularized(&ball3, &x3, &y3).unwrap();
        assert!((g3 - (s3 + reg3)).abs() < 1e-12 * g3.abs());
    }

    #[test]
    fn harmonic_diff_anchors() {
        let outer = Ball::unit(2);
        let inner = Ball::new(vec![0.0, 0.0], 0.5).unwrap();
        let z = [0.0, 0.0];
        let h = harmonic_diff_kernel(&outer, &inner, &z, &z).unwrap();
        assert!((h - LN2).abs() < 1e-14, "{h}");
        let outer3 = Ball::unit(3);
        let inner3 = Ball::new(vec![0.0, 0.0, 0.0], 0.5).unwrap();
        let z3 = [0.0, 0.0, 0.0];
        let h3 = harmonic_diff_kernel(&outer3, &inner3, &z3, &z3).unwrap();
        assert!((h3 - 1.0).abs() < 1e-14, "{h3}");
    }

    #[test]
    fn harmonic_diff_matches_green_difference() {
        let outer = Ball::unit(2);
        let inner = Ball::new(vec![0.2, 0.0], 0.5).unwrap();
        let x = [0.3, 0.1];
        let y = [0.05, -0.2];
        let h = harmonic_diff_kernel(&outer, &inner, &x, &y).unwrap();
        let direct =
            green_ball(&outer, &x, &y).unwrap() - green_ball(&inner, &x, &y).unwrap();
        assert!((h - direct).abs() < 1e-12, "{h} vs {direct}");
        // symmetric
        let h2 = harmonic_diff_kernel(&outer, &inner, &y, &x).unwrap();
        assert!((h - h2).abs() < 1e-13);
        // rejects a non-nested configuration
        let poking_out = Ball::new(vec![0.5, 0.0], 0.7).unwrap();
        assert!(harmonic_diff_kernel(&outer, &poking_out, &x, &y).is_err());
    }

    #[test]
    fn harmonic_diff_is_harmonic_in_x() {
        let outer = Ball::unit(2);
        let inner = Ball::new(vec![0.1, -0.05], 0.6).unwrap();
        let y = vec![0.2, 0.1];
        let f = |x: &[f64]| harmonic_diff_kernel(&outer, &inner, x, &y).unwrap();
        for x in [[0.1, -0.05], [0.2, 0.1 + 1e-7], [0.35, 0.2]] {
            let lap = laplacian_fd4(f, &x, 1e-3);
            assert!(lap.abs() < 1e-8, "laplacian {lap} at {x:?}");
        }
    }

    #[test]
    fn wick_four_point_symmetry_and_positivity() {
        let ball = Ball::unit(2);
        let a: &[f64] = &[0.5, 0.0];
        let b: &[f64] = &[-0.5, 0.0];
        let c: &[f64] = &[0.0, 0.5];
        let d: &[f64] = &[0.0, -0.5];
        let base = wick_g4(&ball, &[a, b, c, d]).unwrap();
        assert!(base > 0.0);
        for perm in [
            [b, a, c, d],
            [c, d, a, b],
            [d, b, c, a],
            [a, c, b, d],
        ] {
            let v = wick_g4(&ball, &perm).unwrap();
            assert!((v - base).abs() < 1e-13 * base);
        }
        // structural identity against hand-assembled products
        let g = |x: &[f64], y: &[f64]| green_ball(&ball, x, y).unwrap();
        let manual = g(a, b) * g(c, d) + g(a, c) * g(b, d) + g(a, d) * g(b, c);
        assert!((base - manual).abs() < 1e-14 * base);
        assert!(wick_g4(&ball, &[a, a, c, d]).is_err());
    }

    #[test]
    fn poisson_kernel_properties() {
        for dim in [2usize, 3] {
            let ball = Ball::unit(dim);
            let mut z = vec![0.0; dim];
            let mut theta = vec![0.0; dim];
            theta[0] = 1.0;
            assert!((poisson_kernel(&ball, &z, &theta).unwrap() - 1.0).abs() < 1e-15);
            z[0] = 0.4;
            z[1] = -0.2;
            let rule = SphereRule::new(dim, 24).unwrap();
            let total = rule.integrate(|u| poisson_kernel(&ball, &z, u).unwrap());
            assert!((total - 1.0).abs() < 1e-12, "dim {dim}: total {total}");
            assert!(poisson_kernel(&ball, &theta, &theta).is_err());
            assert!(poisson_kernel(&ball, &z, &z).is_err());
        }
    }

    #[test]
    fn poisson_kernel_harmonic_in_z() {
        let ball = Ball::unit(2);
        let theta = vec![0.6, 0.8];
        let f = |z: &[f64]| poisson_kernel(&ball, z, &theta).unwrap();
        for z in [[0.0, 0.0], [0.3, -0.4], [-0.5, 0.1]] {
            let lap = laplacian_fd4(f, &z, 1e-3);
            assert!(lap.abs() < 1e-6, "laplacian {lap}");
        }
    }

    #[test]
    fn positive_semidefinite_gram_of_diff_kernel() {
        let outer = Ball::unit(2);
        let inner = Ball::new(vec![0.0, 0.0], 0.6).unwrap();
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|k| {
                let ang = 0.5 * k as f64;
                let rad = 0.05 + 0.04 * k as f64;
                vec![rad * ang.cos(), rad * ang.sin()]
            })
            .collect();
        let n = pts.len();
        let mut gram = nalgebra::DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] = harmonic_diff_kernel(&outer, &inner, &pts[a], &pts[b]).unwrap();
            }
        }
        let eig = nalgebra::SymmetricEigen::new(gram);
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > -1e-9, "minimum Gram eigenvalue {min}");
    }
}
