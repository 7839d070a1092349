use super::bessel::{bessel_j, bessel_j_deriv};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

/// Zeros `j_{1,v} ≤ j_{2,v} ≤ …` of `J_v`. For `v < 0` the first `−v` entries are exactly 0 and
/// `j_{b,v} = j_{b+v,−v}` afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub order: i32,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    /// 1-based access.
    pub fn get(&self, b: usize) -> f64 {
        self.zeros[b - 1]
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Number of leading exact zeros.
    pub fn zero_count(&self) -> usize {
        (-self.order).max(0) as usize
    }
}

type Cache = RwLock<HashMap<u32, Arc<Vec<f64>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Positive zeros of `J_n`, `n ≥ 0`, shared read-only once built.
fn positive_zeros(n: u32, count: usize) -> Result<Arc<Vec<f64>>> {
    if let Some(z) = cache().read().expect("zero cache poisoned").get(&n) {
        if z.len() >= count {
            return Ok(Arc::clone(z));
        }
    }
    let target = count.max(16);
    let zeros = if n == 0 {
        (1..=target).map(zero_order0).collect::<Result<Vec<_>>>()?
    } else {
        let lower = positive_zeros(n - 1, target + 1)?;
        (0..target).map(|i| refine(n as i32, i + 1, lower[i], lower[i + 1])).collect::<Result<Vec<_>>>()?
    };
    let zeros = Arc::new(zeros);
    cache().write().expect("zero cache poisoned").insert(n, Arc::clone(&zeros));
    Ok(zeros)
}

fn zero_order0(b: usize) -> Result<f64> {
    let beta = (b as f64 - 0.25) * PI;
    refine(0, b, beta, beta + 0.25 * PI)
}

fn mcmahon(v: i32, b: usize) -> f64 {
    let beta = (b as f64 + 0.5 * v as f64 - 0.25) * PI;
    let mu = 4.0 * (v as f64).powi(2);
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
}

/// Safeguarded Newton inside `(lo, hi)`, which must bracket exactly one zero of `J_v`.
fn refine(v: i32, b: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo = bessel_j(v, lo);
    let f_hi = bessel_j(v, hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!("no sign change for j_{{{b},{v}}} in ({lo}, {hi})")));
    }
    let guess = mcmahon(v, b);
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for iter in 0..200 {
        let f = bessel_j(v, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / bessel_j_deriv(v, x);
        let next = if iter < 50 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence { what: "Bessel zero refinement", iterations: 200 })
}

/// First `count` zeros of `J_v` with the negative-order convention.
pub fn bessel_zeros(v: i32, count: usize) -> Result<BesselZeroTable> {
    if count == 0 {
        return Err(Error::InvalidParameter("zero table needs count ≥ 1".into()));
    }
    let pad = ((-v).max(0) as usize).min(count);
    let mut zeros = vec![0.0; pad];
    if count > pad {
        let pos = positive_zeros(v.unsigned_abs(), count - pad)?;
        zeros.extend_from_slice(&pos[..count - pad]);
    }
    Ok(BesselZeroTable { order: v, zeros })
}

/// Single zero `j_{b,v}` (1-based `b`).
pub fn bessel_zero(b: usize, v: i32) -> Result<f64> {
    if b == 0 {
        return Err(Error::InvalidParameter("zero index is 1-based".into()));
    }
    Ok(bessel_zeros(v, b)?.get(b))
}

/// `J̃_{b,v}(y) = J_v(j_{b,v} y) / J_v'(j_{b,v})`.
pub fn fourier_bessel(b: usize, v: i32, y: f64) -> Result<f64> {
    let j = bessel_zero(b, v)?;
    if j == 0.0 {
        return Err(Error::Precondition(format!("j_{{{b},{v}}} = 0: Fourier–Bessel normalization undefined")));
    }
    Ok(bessel_j(v, j * y) / bessel_j_deriv(v, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussKronrod;

    #[test]
    fn figure_coordinates() {
        let z0 = bessel_zeros(0, 2).unwrap();
        assert!((z0.get(1) - 2.4048).abs() < 1e-4 && (z0.get(2) - 5.5201).abs() < 1e-4);
        assert!((bessel_zeros(1, 1).unwrap().get(1) - 3.8317).abs() < 1e-4);
        let zm = bessel_zeros(-1, 3).unwrap();
        assert_eq!(zm.get(1), 0.0);
        assert!((zm.get(2) - 3.8317).abs() < 1e-4 && (zm.get(3) - 7.0156).abs() < 1e-4);
        assert_eq!(zm.zero_count(), 1);
    }

    #[test]
    fn high_precision_values() {
        // Reference digits: j_{1,0}, j_{10,3}, j_{1,40}, j_{400,0}.
        let cases = [
            (1, 0, 2.404_825_557_695_773),
            (10, 3, 35.218_670_738_610_115),
            (1, 40, 46.648_409_498_285_74),
            (400, 0, 1_255.851_762_806_527_4),
        ];
        for (b, v, want) in cases {
            let got = bessel_zero(b, v).unwrap();
            assert!((got - want).abs() < 1e-11 * want, "j_{b},{v}: {got} vs {want}");
        }
    }

    #[test]
    fn residual_interlacing_and_derivative_identity() {
        for v in 0..=12 {
            let t = bessel_zeros(v, 60).unwrap();
            let next = bessel_zeros(v + 1, 60).unwrap();
            for b in 1..=60 {
                let z = t.get(b);
                assert!(bessel_j(v, z).abs() <= 1e-12 * bessel_j_deriv(v, z).abs() * z);
                assert!((bessel_j_deriv(v, z) - bessel_j(v - 1, z)).abs() < 1e-10);
                assert!(z < next.get(b));
                if b < 60 {
                    assert!(next.get(b) < t.get(b + 1));
                }
            }
        }
    }

    #[test]
    fn negative_order_shifts() {
        let t = bessel_zeros(-3, 10).unwrap();
        let p = bessel_zeros(3, 7).unwrap();
        assert_eq!(&t.zeros[..3], &[0.0; 3]);
        assert_eq!(&t.zeros[3..], &p.zeros[..]);
        assert_eq!(bessel_zeros(-5, 2).unwrap().zeros, vec![0.0, 0.0]);
    }

    #[test]
    fn fourier_bessel_values() {
        assert!(fourier_bessel(1, 0, 1.0).unwrap().abs() < 1e-15);
        let y0 = fourier_bessel(1, 0, 0.0).unwrap();
        let j = bessel_zero(1, 0).unwrap();
        assert!((y0 - 1.0 / bessel_j_deriv(0, j)).abs() < 1e-15);
        assert!((bessel_j_deriv(0, j) + 0.5191).abs() < 1e-4);
        assert!(matches!(fourier_bessel(1, -1, 0.5), Err(Error::Precondition(_))));
    }

    #[test]
    fn fourier_bessel_orthonormal() {
        let gk = GaussKronrod::new(1e-12, 1e-12);
        for v in 0..=8 {
            for i in 1..=10 {
                for j in i..=10 {
                    let ip = gk
                        .integrate(
                            |z| 2.0 * fourier_bessel(i, v, z).unwrap() * fourier_bessel(j, v, z).unwrap() * z,
                            0.0,
                            1.0,
                        )
                        .unwrap()
                        .value;
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-8, "v={v} i={i} j={j} ip={ip}");
                }
            }
        }
    }
}
