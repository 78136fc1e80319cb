//! Bessel functions J_n and spherical Bessel functions j_n of integer order,
//! their first derivatives, and their positive zeros.
//!
//! Evaluation dispatches between the ascending series (small argument) and
//! Miller's normalized backward recurrence (everything else). Zeros are
//! bracketed by a scan (consecutive zeros are separated by more than the scan
//! step), narrowed by bisection and polished by Newton steps.

/// Largest order the zero tables are expected to handle.
pub const MAX_ORDER: usize = 64;

/// Absolute residual required of a polished zero.
pub const ZERO_RESIDUAL: f64 = 1e-12;

fn series_j(n: usize, x: f64) -> f64 {
    let hx = 0.5 * x;
    let mut t = 1.0;
    for k in 1..=n {
        t *= hx / k as f64;
    }
    let q = hx * hx;
    let mut sum = t;
    for k in 1..=120 {
        t *= -q / (k as f64 * (n + k) as f64);
        sum += t;
        if t.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn miller_start(nmax: usize, x: f64) -> usize {
    // The floor of 12 keeps the neglected tail of the normalization sum below
    // 1e-17 even for small arguments.
    let base = nmax.max(x.ceil() as usize).max(12) + 1;
    let mut m = base + 1 + (40.0 * base as f64).sqrt().ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    m
}

/// J_0(x)..J_nmax(x) in one backward-recurrence sweep, for x > 0.
fn miller_j_all(nmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(x > 0.0);
    let m = miller_start(nmax, x);
    let mut jp = 0.0_f64;
    let mut jc = 1e-30_f64;
    let mut sum = 0.0_f64;
    for v in out.iter_mut() {
        *v = 0.0;
    }
    for k in (1..=m).rev() {
        let jm = (2.0 * k as f64 / x) * jc - jp;
        jp = jc;
        jc = jm;
        let ord = k - 1;
        if ord <= nmax {
            out[ord] = jc;
        }
        if ord % 2 == 0 {
            sum += if ord == 0 { jc } else { 2.0 * jc };
        }
        if jc.abs() > 1e250 {
            jp *= 1e-250;
            jc *= 1e-250;
            sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let scale = 1.0 / sum;
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// Bessel function of the first kind J_n(x), defined here for x >= 0.
pub fn bessel_j(n: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "bessel_j takes nonnegative arguments");
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= 9.0 {
        return series_j(n, x);
    }
    let mut buf = vec![0.0; n + 1];
    miller_j_all(n, x, &mut buf);
    buf[n]
}

/// J_0(x)..J_nmax(x).
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x <= 9.0 {
        for (n, v) in out.iter_mut().enumerate() {
            *v = series_j(n, x);
        }
        return out;
    }
    miller_j_all(nmax, x, &mut out);
    out
}

/// d/dx J_n(x).
pub fn bessel_j_prime(n: usize, x: f64) -> f64 {
    if n == 0 {
        return -bessel_j(1, x);
    }
    let seq = bessel_j_seq(n + 1, x);
    0.5 * (seq[n - 1] - seq[n + 1])
}

fn newton_polish(f: impl Fn(f64) -> (f64, f64), mut x: f64) -> f64 {
    for _ in 0..50 {
        let (v, d) = f(x);
        let step = v / d;
        x -= step;
        if step.abs() <= 1e-15 * x {
            break;
        }
    }
    x
}

fn bracketed_zero(f: impl Fn(f64) -> (f64, f64), mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a).0;
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        let fm = f(m).0;
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    newton_polish(f, 0.5 * (a + b))
}

fn scan_zeros(f: impl Fn(f64) -> (f64, f64) + Copy, start: f64, step: f64, count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a).0;
    while zeros.len() < count {
        let b = a + step;
        let fb = f(b).0;
        if fa == 0.0 {
            zeros.push(a);
            a = b + step;
            fa = f(a).0;
            continue;
        }
        if fa * fb < 0.0 {
            zeros.push(bracketed_zero(f, a, b));
        }
        a = b;
        fa = fb;
    }
    zeros
}

/// First `count` positive zeros of J_n, in increasing order.
pub fn bessel_j_zeros(n: usize, count: usize) -> Vec<f64> {
    assert!(n <= MAX_ORDER, "order {n} beyond supported zero tables");
    let eval = |x: f64| {
        let seq = bessel_j_seq(n + 1, x);
        let d = if n == 0 {
            -seq[1]
        } else {
            0.5 * (bessel_j(n - 1, x) - seq[n + 1])
        };
        (seq[n], d)
    };
    // The first positive zero of J_n exceeds sqrt(n(n+2)); consecutive zeros
    // are separated by at least ~3.1, so a 0.5 scan step cannot skip any.
    let start = ((n * (n + 2)) as f64).sqrt().max(1.5);
    scan_zeros(eval, start, 0.5, count)
}

/// The i-th positive zero of J_n (i >= 1).
pub fn bessel_j_zero(n: usize, i: usize) -> f64 {
    assert!(i >= 1, "zero index starts at 1");
    bessel_j_zeros(n, i)[i - 1]
}

fn sph_j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let q = x * x;
        1.0 - q / 6.0 * (1.0 - q / 20.0)
    } else {
        x.sin() / x
    }
}

fn sph_j1(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let q = x * x;
        x / 3.0 * (1.0 - q / 10.0 * (1.0 - q / 28.0))
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

fn series_sph_j(n: usize, x: f64) -> f64 {
    let mut t = 1.0;
    for k in 1..=n {
        t *= x / (2 * k + 1) as f64;
    }
    let q = 0.5 * x * x;
    let mut sum = t;
    for k in 1..=80 {
        t *= -q / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += t;
        if t.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn miller_sph_all(nmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(x > 0.0);
    let m = miller_start(nmax, x);
    let mut fp = 0.0_f64;
    let mut fc = 1e-30_f64;
    let mut f0 = 0.0_f64;
    let mut f1 = 0.0_f64;
    for v in out.iter_mut() {
        *v = 0.0;
    }
    for k in (1..=m).rev() {
        let fm = ((2 * k + 1) as f64 / x) * fc - fp;
        fp = fc;
        fc = fm;
        let ord = k - 1;
        if ord <= nmax {
            out[ord] = fc;
        }
        if ord == 0 {
            f0 = fc;
            f1 = fp;
        }
        if fc.abs() > 1e250 {
            fp *= 1e-250;
            fc *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // Anchor against whichever closed-form low order is larger; near a zero of
    // sin(x)/x the order-one value is bounded away from zero and vice versa.
    let j0 = sph_j0(x);
    let j1 = sph_j1(x);
    let scale = if j0.abs() >= j1.abs() { j0 / f0 } else { j1 / f1 };
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// Spherical Bessel function j_n(x), defined here for x >= 0.
pub fn sph_j(n: usize, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "sph_j takes nonnegative arguments");
    match n {
        0 => return sph_j0(x),
        1 => return sph_j1(x),
        _ => {}
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 2.0 {
        return series_sph_j(n, x);
    }
    let mut buf = vec![0.0; n + 1];
    miller_sph_all(n, x, &mut buf);
    buf[n]
}

/// j_0(x)..j_nmax(x).
pub fn sph_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x <= 2.0 {
        for (n, v) in out.iter_mut().enumerate() {
            *v = series_sph_j(n, x);
        }
        return out;
    }
    miller_sph_all(nmax, x, &mut out);
    out
}

/// d/dx j_n(x).
pub fn sph_j_prime(n: usize, x: f64) -> f64 {
    if n == 0 {
        return -sph_j1(x);
    }
    sph_j(n - 1, x) - (n as f64 + 1.0) / x * sph_j(n, x)
}

/// First `count` positive zeros of j_n, in increasing order.
pub fn sph_j_zeros(n: usize, count: usize) -> Vec<f64> {
    assert!(n <= MAX_ORDER, "order {n} beyond supported zero tables");
    let eval = |x: f64| {
        let v = sph_j(n, x);
        let d = sph_j_prime(n, x);
        (v, d)
    };
    let nu = n as f64 + 0.5;
    let start = (nu * (nu + 2.0)).sqrt().max(2.5);
    scan_zeros(eval, start, 0.5, count)
}

/// The i-th positive zero of j_n (i >= 1).
pub fn sph_j_zero(n: usize, i: usize) -> f64 {
    assert!(i >= 1, "zero index starts at 1");
    sph_j_zeros(n, i)[i - 1]
}

/// Spherical mean of a unit-frequency Helmholtz solution over a sphere of
/// radius t, relative to its center value: J_0(t) in dimension 2, sin(t)/t in
/// dimension 3.
pub fn helmholtz_mean(dim: usize, t: f64) -> f64 {
    match dim {
        2 => bessel_j(0, t),
        3 => sph_j0(t),
        d => panic!("helmholtz_mean only implemented for dimensions 2 and 3, got {d}"),
    }
}
