//! One-dimensional Gauss-Legendre quadrature.

/// Nodes and weights on [-1, 1], exact for polynomials of degree 2n - 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights mapped onto [a, b].
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// ∫_a^b f with an n-point rule.
pub fn integrate(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (xs, ws) = gauss_legendre_on(a, b, n);
    xs.iter().zip(&ws).map(|(x, w)| w * f(*x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1usize, 2, 5, 16, 64, 200] {
            let (_, ws) = gauss_legendre(n);
            let s: f64 = ws.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: sum {s}");
        }
    }

    #[test]
    fn frozen_five_point_rule() {
        // Abramowitz & Stegun table 25.4
        let (xs, ws) = gauss_legendre(5);
        assert!((xs[4] - 0.906179845938664).abs() < 1e-14);
        assert!((xs[3] - 0.538469310105683).abs() < 1e-14);
        assert!(xs[2].abs() < 1e-15);
        assert!((ws[4] - 0.236926885056189).abs() < 1e-14);
        assert!((ws[3] - 0.478628670499366).abs() < 1e-14);
        assert!((ws[2] - 0.568888888888889).abs() < 1e-14);
    }

    #[test]
    fn exact_on_polynomials() {
        for n in [3usize, 8, 20] {
            for deg in 0..(2 * n) {
                let got = integrate(0.0, 1.0, n, |x| x.powi(deg as i32));
                let want = 1.0 / (deg as f64 + 1.0);
                assert!(
                    (got - want).abs() < 1e-13,
                    "n = {n}, degree {deg}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn oscillatory_integral() {
        let got = integrate(0.0, 1.0, 64, |x| (50.0 * x).cos());
        let want = (50.0_f64).sin() / 50.0;
        assert!((got - want).abs() < 1e-13);
    }
}
