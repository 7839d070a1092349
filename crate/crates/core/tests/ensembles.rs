use laguerre_corners::ensembles::{
    log_density, sample_matrix_corners, sample_upward_step, secular_roots, tridiagonal_level, CornersSample,
};
use laguerre_corners::quad::GaussKronrod;
use laguerre_corners::rng::{parallel_draws, stream, StreamRng};
use laguerre_corners::stats::{ks_two_sample, variance_se};
use laguerre_corners::zero_temp::{top_level_covariance, CrystalTable};
use proptest::prelude::*;

/// 0.1% critical value of the Kolmogorov distribution.
const KOLMOGOROV_999: f64 = 1.9495;

fn one_sample_ks(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let m = sample.len() as f64;
    let d = sample.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / m).abs()).max(((i + 1) as f64 / m - f).abs())
    });
    d * m.sqrt()
}

#[test]
fn upward_steps_preserve_the_laguerre_marginal() {
    let beta = 1.5;
    let count = 10_000;
    let mut worst = 1.0f64;
    for nc in 1..=4usize {
        let stepped: Vec<Vec<Vec<f64>>> = parallel_draws(40 + nc as u64, count, |rng: &mut StreamRng| {
            let mut lev = tridiagonal_level(nc, nc, beta, rng).unwrap();
            (1..=3)
                .map(|_| {
                    lev = sample_upward_step(&lev, beta, rng).unwrap();
                    lev.clone()
                })
                .collect()
        });
        for m in 1..=3usize {
            let direct: Vec<Vec<f64>> = parallel_draws(80 + (10 * nc + m) as u64, count, |rng: &mut StreamRng| {
                tridiagonal_level(nc + m, nc, beta, rng).unwrap()
            });
            for i in 0..nc {
                let x: Vec<f64> = stepped.iter().map(|s| s[m - 1][i]).collect();
                let y: Vec<f64> = direct.iter().map(|l| l[i]).collect();
                worst = worst.min(ks_two_sample(&x, &y).p_value);
            }
        }
    }
    assert!(worst >= 1e-3, "min p-value {worst}");
}

/// At β = 2 the conditional law of one upward step is
/// `(μ₁−μ₂) e^{−(μ₁+μ₂)} / ((λ₁−λ₂) e^{−(λ₁+λ₂)})` on `μ₁ > λ₁ > μ₂ > λ₂`.
#[test]
fn upward_step_matches_conditional_density() {
    let (l1, l2) = (3.0, 1.2);
    let density = |m1: f64, m2: f64| (m1 - m2) * (-(m1 + m2 - l1 - l2)).exp() / (l1 - l2);
    let gk = GaussKronrod::new(1e-12, 1e-12);
    let upper = l1 + 60.0;
    let total = gk.integrate(|m2| gk.integrate(|m1| density(m1, m2), l1, upper).unwrap().value, l2, l1).unwrap().value;
    assert!((total - 1.0).abs() < 1e-9, "normalization {total}");
    let cdf2 =
        |x: f64| gk.integrate(|m2| gk.integrate(|m1| density(m1, m2), l1, upper).unwrap().value, l2, x).unwrap().value;
    let cdf1 =
        |x: f64| gk.integrate(|m1| gk.integrate(|m2| density(m1, m2), l2, l1).unwrap().value, l1, x).unwrap().value;

    let draws = parallel_draws(7, 100_000, |rng: &mut StreamRng| sample_upward_step(&[l1, l2], 2.0, rng).unwrap());
    let mut top: Vec<f64> = draws.iter().map(|d| d[0]).collect();
    let mut bottom: Vec<f64> = draws.iter().map(|d| d[1]).collect();
    // Tabulate the CDFs on a fine grid and interpolate, rather than integrating per draw.
    let table = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| -> Vec<(f64, f64)> {
        (0..=2000).map(|i| a + (b - a) * i as f64 / 2000.0).map(|x| (x, f(x))).collect()
    };
    let lookup = |t: &[(f64, f64)], x: f64| -> f64 {
        let i = t.partition_point(|p| p.0 < x);
        if i == 0 {
            return 0.0;
        }
        if i == t.len() {
            return 1.0;
        }
        let (x0, f0) = t[i - 1];
        let (x1, f1) = t[i];
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    };
    let t2 = table(&cdf2, l2, l1);
    let t1 = table(&cdf1, l1, l1 + 20.0);
    assert!(one_sample_ks(&mut bottom, |x| lookup(&t2, x)) < KOLMOGOROV_999);
    assert!(one_sample_ks(&mut top, |x| lookup(&t1, x)) < KOLMOGOROV_999);
}

#[test]
fn large_beta_single_level_matches_zero_temperature() {
    let beta = 1e4;
    let c = CrystalTable::new(5, 3).unwrap();
    let exact = top_level_covariance(&c).unwrap();
    let draws = parallel_draws(11, 50_000, |rng: &mut StreamRng| tridiagonal_level(3, 5, beta, rng).unwrap());
    for i in 0..3 {
        let col: Vec<f64> = draws.iter().map(|d| beta.sqrt() * (d[i] - c.nonzero(3)[i])).collect();
        let (var, _) = variance_se(&col);
        assert!((var / exact[(i, i)] - 1.0).abs() < 0.1, "i={i} var={var} exact={}", exact[(i, i)]);
    }
}

#[test]
fn matrix_sampler_is_reproducible() {
    let a = sample_matrix_corners(3, 5, 2.0, &mut stream(99, 0)).unwrap();
    let b = sample_matrix_corners(3, 5, 2.0, &mut stream(99, 0)).unwrap();
    assert_eq!(a, b);
    let c = sample_matrix_corners(3, 5, 2.0, &mut stream(99, 1)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn density_is_a_function_of_the_arrays() {
    let s = sample_matrix_corners(2, 4, 1.0, &mut stream(5, 0)).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: CornersSample = serde_json::from_str(&json).unwrap();
    assert_eq!(log_density(&s, 1.0).unwrap(), log_density(&back, 1.0).unwrap());
    let csv = s.to_table().to_csv();
    assert!(csv.lines().any(|l| l == "k,i,lambda"));
}

proptest! {
    #[test]
    fn secular_trace_identity(
        gaps in prop::collection::vec(0.01f64..5.0, 1..6),
        weights in prop::collection::vec(0.0f64..3.0, 6),
    ) {
        let mut level: Vec<f64> = Vec::new();
        let mut x = 0.1;
        for g in gaps.iter().rev() {
            x += g;
            level.push(x);
        }
        level.reverse();
        let w = &weights[..level.len()];
        let out = secular_roots(&level, w).unwrap();
        let shift: f64 = out.iter().sum::<f64>() - level.iter().sum::<f64>();
        prop_assert!((shift - w.iter().sum::<f64>()).abs() < 1e-10);
        for (i, &mu) in out.iter().enumerate() {
            prop_assert!(mu >= level[i]);
            if i > 0 {
                prop_assert!(mu <= level[i - 1]);
            }
        }
    }

    #[test]
    fn sampled_levels_interlace(seed in any::<u64>(), nc in 1usize..5, extra in 0usize..4, real in any::<bool>()) {
        let s = sample_matrix_corners(nc, nc + extra, if real { 1.0 } else { 2.0 }, &mut stream(seed, 0)).unwrap();
        prop_assert!(s.is_interlaced());
    }
}
