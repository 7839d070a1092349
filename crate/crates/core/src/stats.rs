//! Sample moments with standard errors, and the two-sample Kolmogorov–Smirnov test.

use crate::linalg::Matrix;

/// Empirical covariance matrix and entrywise standard errors.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    pub mean: Vec<f64>,
    pub cov: Matrix<f64>,
    pub stderr: Matrix<f64>,
    pub samples: usize,
}

/// Two-pass estimate; the standard error of entry (i,j) is `sd((x_i−x̄_i)(x_j−x̄_j))/√M`.
pub fn sample_covariance(draws: &[Vec<f64>]) -> CovarianceEstimate {
    let m = draws.len();
    let d = draws.first().map_or(0, Vec::len);
    let mf = m as f64;
    let mut mean = vec![0.0; d];
    for x in draws {
        for (s, v) in mean.iter_mut().zip(x) {
            *s += v;
        }
    }
    mean.iter_mut().for_each(|s| *s /= mf);
    let mut s1 = Matrix::<f64>::zeros(d, d);
    let mut s2 = Matrix::<f64>::zeros(d, d);
    let mut c = vec![0.0; d];
    for x in draws {
        for i in 0..d {
            c[i] = x[i] - mean[i];
        }
        for i in 0..d {
            for j in 0..=i {
                let p = c[i] * c[j];
                s1[(i, j)] += p;
                s2[(i, j)] += p * p;
            }
        }
    }
    let mut cov = Matrix::zeros(d, d);
    let mut stderr = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let e = s1[(i, j)] / mf;
            let var = (s2[(i, j)] / mf - e * e).max(0.0);
            let se = (var / mf).sqrt();
            cov[(i, j)] = e;
            cov[(j, i)] = e;
            stderr[(i, j)] = se;
            stderr[(j, i)] = se;
        }
    }
    CovarianceEstimate { mean, cov, stderr, samples: m }
}

/// Mean and its standard error.
pub fn mean_se(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Variance (about the sample mean) and its standard error `√((μ₄ − σ⁴)/M)`.
pub fn variance_se(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in x {
        let d = (v - mean).powi(2);
        m2 += d;
        m4 += d * d;
    }
    m2 /= m;
    m4 /= m;
    (m2, ((m4 - m2 * m2).max(0.0) / m).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov distribution
/// (Stephens' small-sample correction to the effective size).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < na && j < nb {
        let x = a[i].min(b[j]);
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let sq = ne.sqrt();
    KsResult { statistic: d, p_value: kolmogorov_q((sq + 0.12 + 0.11 / sq) * d) }
}

/// `Q_KS(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..500).map(|i| i as f64 / 500.0).collect();
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let b: Vec<f64> = a.iter().map(|x| x + 0.3).collect();
        let r = ks_two_sample(&a, &b);
        assert!((r.statistic - 0.3).abs() < 1e-2);
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn kolmogorov_tail_known_value() {
        // Q_KS(1.36) ≈ 0.0494 (the 5% critical point).
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 1e-3);
    }

    #[test]
    fn covariance_of_deterministic_pairs() {
        let draws: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let e = sample_covariance(&draws);
        assert!((e.cov[(0, 0)] - 1.25).abs() < 1e-15);
        assert!((e.cov[(0, 1)] - 2.5).abs() < 1e-15);
        let (v, _) = variance_se(&[0.0, 1.0, 2.0, 3.0]);
        assert!((v - 1.25).abs() < 1e-15);
    }
}
