//! Finite-difference Laplacians used by residual checks.

/// Second-order central-difference Laplacian.
pub fn laplacian_fd2(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let mut acc = 0.0;
    let f0 = f(x);
    let mut p = x.to_vec();
    for k in 0..x.len() {
        p[k] = x[k] + h;
        let fp = f(&p);
        p[k] = x[k] - h;
        let fm = f(&p);
        p[k] = x[k];
        acc += fp - 2.0 * f0 + fm;
    }
    acc / (h * h)
}

/// Fourth-order five-point-per-axis Laplacian; error O(h^4 f^(6)), which keeps
/// residuals of highly oscillatory eigenfunctions well below the second-order
/// stencil's.
pub fn laplacian_fd4(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let mut acc = 0.0;
    let f0 = f(x);
    let mut p = x.to_vec();
    for k in 0..x.len() {
        p[k] = x[k] + h;
        let f1p = f(&p);
        p[k] = x[k] - h;
        let f1m = f(&p);
        p[k] = x[k] + 2.0 * h;
        let f2p = f(&p);
        p[k] = x[k] - 2.0 * h;
        let f2m = f(&p);
        p[k] = x[k];
        acc += (-f2p + 16.0 * f1p - 30.0 * f0 + 16.0 * f1m - f2m) / 12.0;
    }
    acc / (h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quadratics() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] - 2.0 * x[1] * x[1] + x[0] * x[1];
        let got = laplacian_fd2(f, &[0.3, -0.2], 1e-4);
        assert!((got - 2.0).abs() < 1e-6);
        let got4 = laplacian_fd4(f, &[0.3, -0.2], 1e-3);
        assert!((got4 - 2.0).abs() < 1e-8);
    }

    #[test]
    fn oscillatory_accuracy_gap() {
        // f = cos(40 x) + cos(40 y), Laplacian = -1600 f
        let w = 40.0;
        let f = |x: &[f64]| (w * x[0]).cos() + (w * x[1]).cos();
        let x = [0.21, 0.13];
        let want = -w * w * f(&x);
        let e2 = (laplacian_fd2(f, &x, 1e-3) - want).abs() / want.abs();
        let e4 = (laplacian_fd4(f, &x, 1e-3) - want).abs() / want.abs();
        assert!(e2 > 1e-4, "second order error unexpectedly small: {e2}");
        assert!(e4 < 1e-6, "fourth order error too large: {e4}");
    }
}
