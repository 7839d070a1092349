//! Adaptive Gauss–Kronrod (7/15) integration and Golub–Welsch Gauss–Legendre rules.

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

/// Globally adaptive integrator: the panel with the largest error estimate is bisected
/// until the summed error is below `max(abs_tol, rel_tol·|I|)`.
#[derive(Debug, Clone, Copy)]
pub struct GaussKronrod<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> GaussKronrod<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        GaussKronrod { abs_tol, rel_tol, max_intervals: 2000 }
    }

    fn panel(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
        let half = T::of(0.5);
        let c = half * (a + b);
        let h = half * (b - a);
        let fc = f(c);
        let mut kron = fc * T::of(WGK[7]);
        let mut gauss = fc * T::of(WG[3]);
        for j in 0..7 {
            let dx = h * T::of(XGK[j]);
            let s = f(c - dx) + f(c + dx);
            kron += T::of(WGK[j]) * s;
            if j % 2 == 1 {
                gauss += T::of(WG[j / 2]) * s;
            }
        }
        (kron * h, ((kron - gauss) * h).abs())
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T, a: T, b: T) -> Result<Estimate<T>> {
        let mut panels = vec![{
            let (v, e) = Self::panel(&mut f, a, b);
            (a, b, v, e)
        }];
        loop {
            let value = panels.iter().fold(T::zero(), |s, p| s + p.2);
            let error = panels.iter().fold(T::zero(), |s, p| s + p.3);
            if !value.is_finite() {
                return Err(Error::Degenerate("non-finite integrand".into()));
            }
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                return Ok(Estimate { value, error, intervals: panels.len() });
            }
            if panels.len() >= self.max_intervals {
                return Err(Error::NoConvergence { what: "adaptive quadrature", iterations: panels.len() });
            }
            let worst = (0..panels.len())
                .max_by(|&i, &j| panels[i].3.partial_cmp(&panels[j].3).unwrap_or(std::cmp::Ordering::Equal))
                .expect("nonempty");
            let (lo, hi, _, _) = panels.swap_remove(worst);
            let mid = T::of(0.5) * (lo + hi);
            let (v1, e1) = Self::panel(&mut f, lo, mid);
            let (v2, e2) = Self::panel(&mut f, mid, hi);
            panels.push((lo, mid, v1, e1));
            panels.push((mid, hi, v2, e2));
        }
    }
}

/// `n`-point Gauss–Legendre nodes (increasing) and weights on [−1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let off = (1..n)
        .map(|i| {
            let i = T::of_usize(i);
            i / (T::of(4.0) * i * i - T::one()).sqrt()
        })
        .collect();
    let jac = SymTridiagonal::new(vec![T::zero(); n], off)?;
    let (nodes, first) = jac.eigen_first_components()?;
    let two = T::of(2.0);
    let mut pairs: Vec<(T, T)> = nodes.into_iter().zip(first.into_iter().map(|v| two * v * v)).collect();
    pairs.reverse();
    Ok(pairs.into_iter().unzip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let gk = GaussKronrod::new(1e-14, 1e-14);
        let est = gk.integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0).unwrap();
        assert!((est.value - (63.0 / 6.0 - 9.0)).abs() < 1e-13);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn endpoint_singularity() {
        let gk = GaussKronrod::new(1e-10, 1e-12);
        let est = gk.integrate(|x: f64| x.sqrt().ln(), 0.0, 1.0).unwrap();
        assert!((est.value + 0.5).abs() < 1e-9);
    }

    #[test]
    fn legendre_rule_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre::<f64>(6).unwrap();
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn reports_failure() {
        let gk = GaussKronrod { abs_tol: 1e-16, rel_tol: 0.0, max_intervals: 4 };
        assert!(gk.integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0).is_err());
    }
}
