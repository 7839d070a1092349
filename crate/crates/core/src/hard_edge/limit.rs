use crate::error::{Error, Result};
use crate::export::Table;
use crate::quad::GaussKronrod;
use crate::specfun::{bessel_j, bessel_j_deriv, bessel_zero};
use serde::{Deserialize, Serialize};

fn check_index(a: usize, s: i32, name: &str) -> Result<()> {
    if (a as i64) < (-(s as i64)).max(1) {
        return Err(Error::Precondition(format!(
            "index ({name}, order) = ({a}, {s}) violates {name} ≥ max(−order, 1)"
        )));
    }
    Ok(())
}

/// Nonzero `(j, J'(j))` for `(a, s)`, or `None` when `j_{a,s} = 0`.
fn zero_and_slope(a: usize, s: i32) -> Result<Option<(f64, f64)>> {
    let j = bessel_zero(a, s)?;
    Ok((j != 0.0).then(|| (j, bessel_j_deriv(s, j))))
}

/// Integrand of the limiting covariance in `y`, with the removable `y = 0` value set to 0:
/// `(j_a j_b / 2) J̃_{a,s}(√(1−y)) J̃_{b,t}(√(1−y)) (1−y)^{|s−t|/2} / y`.
pub fn limit_integrand(a: usize, s: i32, b: usize, t: i32, y: f64) -> Result<f64> {
    check_index(a, s, "a")?;
    check_index(b, t, "b")?;
    let (Some((ja, da)), Some((jb, db))) = (zero_and_slope(a, s)?, zero_and_slope(b, t)?) else {
        return Ok(0.0);
    };
    if y <= 0.0 {
        return Ok(0.0);
    }
    let z = (1.0 - y).sqrt();
    let fa = bessel_j(s, ja * z) / da;
    let fb = bessel_j(t, jb * z) / db;
    Ok(0.5 * ja * jb * fa * fb * (1.0 - y).powf(0.5 * (s - t).abs() as f64) / y)
}

/// `lim N² cov(ξ_{N+1−s−a, N−s}, ξ_{N+1−t−b, N−t})`, by quadrature.
///
/// Integrated after `y = 1 − z²`, which removes the square-root endpoint behaviour at `y = 1`:
/// `(j_a j_b/2) ∫₀¹ J̃_{a,s}(z) J̃_{b,t}(z) z^{|s−t|} 2z/(1−z²) dz`; the `z = 1` value is 0.
/// A zero `j` (possible for negative orders) makes the covariance 0.
pub fn limit_covariance(a: usize, s: i32, b: usize, t: i32) -> Result<f64> {
    check_index(a, s, "a")?;
    check_index(b, t, "b")?;
    let (Some((ja, da)), Some((jb, db))) = (zero_and_slope(a, s)?, zero_and_slope(b, t)?) else {
        return Ok(0.0);
    };
    let power = (s - t).unsigned_abs() as i32 + 1;
    let f = |z: f64| {
        if z >= 1.0 {
            return 0.0;
        }
        bessel_j(s, ja * z) / da * bessel_j(t, jb * z) / db * z.powi(power) * 2.0 / (1.0 - z * z)
    };
    let est = GaussKronrod::new(1e-11, 1e-13).integrate(f, 0.0, 1.0)?;
    Ok(0.5 * ja * jb * est.value)
}

/// `j²_{r,α}/(4N)`, the leading approximation of `l_{k+1−r,k}` with `α = N − k`.
pub fn hard_edge_root_approx(r: usize, k: usize, n_center: usize) -> Result<f64> {
    if k == 0 || n_center == 0 || r == 0 || r as i64 <= k as i64 - n_center as i64 {
        return Err(Error::Precondition(format!("need r > k − N and r ≥ 1 (r={r}, k={k}, N={n_center})")));
    }
    let alpha = n_center as i64 - k as i64;
    let alpha = i32::try_from(alpha).map_err(|_| Error::InvalidParameter(format!("order {alpha} out of range")))?;
    let j = bessel_zero(r, alpha)?;
    Ok(j * j / (4.0 * n_center as f64))
}

/// `(2/j_{r,α}) J_α(j_{r,α}√(1−y)) / J_α'(j_{r,α})`.
pub fn asymptotic_q(r: usize, alpha: i32, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Precondition(format!("y = {y} outside [0, 1]")));
    }
    let Some((j, d)) = zero_and_slope(r, alpha)? else {
        return Err(Error::Precondition(format!("j_{{{r},{alpha}}} = 0")));
    };
    Ok(2.0 / j * bessel_j(alpha, j * (1.0 - y).sqrt()) / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceMethod {
    Quadrature,
    Polymer,
    FiniteN,
}

impl CovarianceMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CovarianceMethod::Quadrature => "quadrature",
            CovarianceMethod::Polymer => "polymer",
            CovarianceMethod::FiniteN => "finiteN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEntry {
    pub a: usize,
    pub s: i32,
    pub b: usize,
    pub t: i32,
    pub value: f64,
    pub method: CovarianceMethod,
    pub truncation: String,
}

/// Columns `a, s, b, t, value, method, truncation_params`.
pub fn covariance_table(entries: &[CovarianceEntry]) -> Table {
    let mut t = Table::new(["a", "s", "b", "t", "value", "method", "truncation_params"])
        .meta("quantity", "hard-edge covariance");
    for e in entries {
        t.push(vec![
            e.a.into(),
            e.s.into(),
            e.b.into(),
            e.t.into(),
            e.value.into(),
            e.method.as_str().into(),
            e.truncation.clone().into(),
        ]);
    }
    t
}
