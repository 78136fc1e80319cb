//! Estimators and gate statistics for the verification suites. Every Monte
//! Carlo comparison reduces to a z-score (estimate minus reference, over a
//! standard error); deterministic identities use absolute tolerances instead
//! and never go through this module's gates.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{argument, Result};

/// Sample moments with standard errors. The variance standard error uses the
/// influence-function form sqrt((m4 - var^2) / n), valid without assuming
/// normality of the underlying draws.
#[derive(Clone, Copy, Debug)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    pub var: f64,
    pub se_mean: f64,
    pub se_var: f64,
    /// excess kurtosis m4 / m2^2 - 3
    pub kurtosis: f64,
    /// kurtosis z-score against the Gaussian null, se = sqrt(24 / n)
    pub kurtosis_z: f64,
}

pub fn moments(xs: &[f64]) -> Result<MomentSummary> {
    let n = xs.len();
    if n < 4 {
        return argument(format!("need at least 4 samples, got {n}"));
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    let var = m2 / (nf - 1.0);
    m2 /= nf;
    m4 /= nf;
    let se_var = ((m4 - m2 * m2).max(0.0) / nf).sqrt();
    let kurtosis = m4 / (m2 * m2) - 3.0;
    Ok(MomentSummary {
        n,
        mean,
        var,
        se_mean: (var / nf).sqrt(),
        se_var,
        kurtosis,
        kurtosis_z: kurtosis / (24.0 / nf).sqrt(),
    })
}

/// Covariance of paired samples with its influence-function standard error:
/// the sample standard deviation of (x - xbar)(y - ybar) over sqrt(n).
pub fn covariance(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() {
        return argument("paired samples must have equal length".to_string());
    }
    let n = xs.len();
    if n < 4 {
        return argument(format!("need at least 4 pairs, got {n}"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let prods: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x - mx) * (y - my))
        .collect();
    let cov = prods.iter().sum::<f64>() / (nf - 1.0);
    let pm = prods.iter().sum::<f64>() / nf;
    let pv = prods.iter().map(|p| (p - pm).powi(2)).sum::<f64>() / (nf - 1.0);
    Ok((cov, (pv / nf).sqrt()))
}

pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    Normal::new(mean, sd).unwrap().cdf(x)
}

/// Two-sided Kolmogorov-Smirnov statistic against a fully specified
/// continuous CDF (no parameters estimated from the data).
pub fn ks_statistic(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let n = xs.len();
    if n == 0 {
        return argument("empty sample".to_string());
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let mut d = 0.0_f64;
    for (k, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((k + 1) as f64 / nf - f).abs());
        d = d.max((f - k as f64 / nf).abs());
    }
    Ok(d)
}

/// Survival function of the Kolmogorov distribution,
/// Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2); the asymptotic p-value of
/// sqrt(n) times the KS statistic.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.3 {
        // Jacobi-theta form converges fast for small t
        let a = std::f64::consts::PI.powi(2) / (8.0 * t * t);
        let mut s = 0.0;
        for k in 0..20_i32 {
            s += (-((2 * k + 1).pow(2) as f64) * a).exp();
        }
        return 1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * s;
    }
    let mut s = 0.0;
    let mut sign = 1.0;
    for k in 1..=50 {
        let term = sign * (-2.0 * (k * k) as f64 * t * t).exp();
        s += term;
        sign = -sign;
        if term.abs() < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// KS test of a sample against N(mean, sd^2), with asymptotic p-value.
pub fn ks_test_normal(xs: &[f64], mean: f64, sd: f64) -> Result<(f64, f64)> {
    let d = ks_statistic(xs, |x| normal_cdf(x, mean, sd))?;
    let p = kolmogorov_sf((xs.len() as f64).sqrt() * d);
    Ok((d, p))
}

/// Critical value t with kolmogorov_sf(t) = level, by bisection.
pub fn kolmogorov_critical(level: f64) -> Result<f64> {
    if !(0.0 < level && level < 1.0) {
        return argument(format!("level {level} outside (0, 1)"));
    }
    let (mut lo, mut hi) = (1e-3, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Survival function of the chi-squared distribution with k degrees of
/// freedom.
pub fn chi_square_sf(x: f64, k: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(k as f64).unwrap().cdf(x)
}

/// Pearson chi-squared statistic for observed counts against expected
/// probabilities; returns (statistic, degrees of freedom, p-value). Degrees
/// of freedom are bins - 1 since the null fixes the probabilities.
pub fn chi_square_counts(observed: &[u64], probs: &[f64]) -> Result<(f64, usize, f64)> {
    if observed.len() != probs.len() {
        return argument("count and probability vectors differ in length".to_string());
    }
    if observed.len() < 2 {
        return argument("need at least 2 bins".to_string());
    }
    let total: u64 = observed.iter().sum();
    let psum: f64 = probs.iter().sum();
    if (psum - 1.0).abs() > 1e-9 {
        return argument(format!("bin probabilities sum to {psum}, expected 1"));
    }
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = total as f64 * p;
        if e < 5.0 {
            return argument(format!("expected count {e:.2} below 5; coarsen the bins"));
        }
        stat += (o as f64 - e).powi(2) / e;
    }
    let dof = observed.len() - 1;
    Ok((stat, dof, chi_square_sf(stat, dof)))
}

/// Two-sided z threshold for a battery of m tests: a Bonferroni-style gate
/// at family level 0.01, floored at 3.
pub fn z_gate(m: usize) -> f64 {
    let m = m.max(1);
    let q = Normal::new(0.0, 1.0)
        .unwrap()
        .inverse_cdf(1.0 - 0.005 / m as f64);
    q.max(3.0)
}

/// z-score of an estimate against a reference value.
pub fn z_score(estimate: f64, reference: f64, se: f64) -> f64 {
    if se == 0.0 {
        if estimate == reference {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (estimate - reference) / se
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_summary_matches_reference() {
        let ys = [0.1, -0.4, 1.3, 2.2, -0.6, 0.0, 0.9, -1.7];
        let m = moments(&ys).unwrap();
        assert!((m.mean - 0.225).abs() < 1e-15);
        assert!((m.var - 1.4792857142857143).abs() < 1e-14);
        assert!((m.kurtosis - -0.6790529631215927).abs() < 1e-12);
        assert!((m.se_mean - (m.var / 8.0).sqrt()).abs() < 1e-15);
        // influence se: sqrt((m4 - m2^2)/n) with biased m2, m4
        let m2b = m.var * 7.0 / 8.0;
        let se = ((3.888530078125 - m2b * m2b) / 8.0_f64).sqrt();
        assert!((m.se_var - se).abs() < 1e-12);
        assert!(moments(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn covariance_of_identical_series_is_variance() {
        let ys = [0.1, -0.4, 1.3, 2.2, -0.6, 0.0, 0.9, -1.7];
        let (c, se) = covariance(&ys, &ys).unwrap();
        assert!((c - 1.4792857142857143).abs() < 1e-14);
        assert!(se > 0.0);
        assert!(covariance(&ys, &ys[..4]).is_err());
    }

    #[test]
    fn ks_statistic_matches_reference() {
        let xs = [-1.2, -0.3, 0.1, 0.8, 2.0];
        let d = ks_statistic(&xs, |x| normal_cdf(x, 0.0, 1.0)).unwrap();
        // tolerance limited by the erf implementation, not the estimator
        assert!((d - 0.18814460141660339).abs() < 5e-9);
        let d2 = ks_statistic(&xs, |x| normal_cdf(x, 0.0, 2.0)).unwrap();
        assert!((d2 - 0.2742531177500736).abs() < 5e-9);
        let (_, p) = ks_test_normal(&xs, 0.0, 1.0).unwrap();
        assert!((p - kolmogorov_sf(5.0_f64.sqrt() * d)).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_sf_matches_reference() {
        for &(t, want) in &[
            (0.4, 0.9971923267772983),
            (0.5, 0.9639452436648751),
            (1.0, 0.26999967167735456),
            (1.5, 0.022217962616525127),
            (2.0, 0.0006709252557796953),
        ] {
            assert!((kolmogorov_sf(t) - want).abs() < 1e-12, "t={t}");
        }
        // one reference on each side of the series switch at t = 0.3
        assert!((kolmogorov_sf(0.28) - 0.9999986881499902).abs() < 1e-12);
        assert!((kolmogorov_sf(0.32) - 0.9999541201308876).abs() < 1e-12);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn kolmogorov_critical_matches_reference() {
        for &(level, want) in &[
            (0.01, 1.6276236115189504),
            (0.002, 1.8584610942903994),
            (0.05, 1.3580986393225507),
        ] {
            let got = kolmogorov_critical(level).unwrap();
            assert!((got - want).abs() < 1e-9, "level {level}: {got}");
        }
        assert!(kolmogorov_critical(0.0).is_err());
    }

    #[test]
    fn chi_square_sf_matches_reference() {
        for &(x, k, want) in &[
            (3.0, 5usize, 0.6999858358786276),
            (10.0, 5, 0.07523524614651217),
            (22.5, 15, 0.09534823443917435),
            (8.0, 1, 0.004677734981047276),
        ] {
            assert!((chi_square_sf(x, k) - want).abs() < 1e-10, "x={x} k={k}");
        }
    }

    #[test]
    fn chi_square_counts_on_fair_bins() {
        let obs = [25u64, 23, 27, 25];
        let p = [0.25; 4];
        let (stat, dof, pval) = chi_square_counts(&obs, &p).unwrap();
        assert_eq!(dof, 3);
        assert!((stat - (4.0 + 4.0) / 25.0).abs() < 1e-12);
        assert!(pval > 0.9);
        assert!(chi_square_counts(&[1, 2], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn gate_thresholds_match_reference() {
        assert!((z_gate(1) - 3.0).abs() < 1e-15); // floor binds: quantile 2.5758
        assert!((z_gate(5) - 3.090232306167813).abs() < 1e-9);
        assert!((z_gate(20) - 3.4807564043462422).abs() < 1e-9);
        assert!((z_gate(100) - 3.8905918864131204).abs() < 1e-9);
    }

    #[test]
    fn z_score_handles_zero_se() {
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert!(z_score(1.0, 2.0, 0.0).is_infinite());
        assert!((z_score(1.5, 1.0, 0.25) - 2.0).abs() < 1e-15);
    }
}
