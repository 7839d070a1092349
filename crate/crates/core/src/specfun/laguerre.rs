use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::real::Real;
use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

/// Degree and (integer, possibly negative) order of a generalized Laguerre polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaguerreParams {
    pub degree: usize,
    pub alpha: i64,
}

impl LaguerreParams {
    pub fn new(degree: usize, alpha: i64) -> Self {
        LaguerreParams { degree, alpha }
    }
}

/// Three-term recurrence `(m+1) L_{m+1} = (2m+1+α−x) L_m − (m+α) L_{m−1}`.
///
/// Works over any field (rationals included); valid as a polynomial identity for every α.
pub fn laguerre_recurrence<T>(n: usize, alpha: i64, x: T) -> T
where
    T: Num + Clone + FromPrimitive,
{
    let c = |v: i64| T::from_i64(v).expect("integer representable");
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = c(1 + alpha) - x.clone();
    for m in 1..n as i64 {
        let next = ((c(2 * m + 1 + alpha) - x.clone()) * cur.clone() - c(m + alpha) * prev) / c(m + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^{(α)}(x)`. For `α < 0 ≤ n+α` the reflection
/// `L_n^{(α)}(x) = (−x)^{−α} (n+α)!/n! · L_{n+α}^{(−α)}(x)` is used.
pub fn laguerre_eval<T: Real>(params: LaguerreParams, x: T) -> T {
    let LaguerreParams { degree: n, alpha } = params;
    if alpha >= 0 || (n as i64) < -alpha {
        return laguerre_recurrence(n, alpha, x);
    }
    let p = (-alpha) as usize;
    let base = laguerre_recurrence(n - p, -alpha, x);
    if x == T::zero() || base == T::zero() {
        return T::zero();
    }
    // Combine in log space: the prefactor x^p·(n−p)!/n! alone can underflow.
    let mut log_mag = T::of_usize(p) * x.abs().ln() + base.abs().ln();
    for i in n - p + 1..=n {
        log_mag -= T::of_usize(i).ln();
    }
    let negative = (base < T::zero()) != (x > T::zero() && p % 2 == 1);
    let mag = log_mag.exp();
    if negative {
        -mag
    } else {
        mag
    }
}

/// `d/dx L_n^{(α)} = −L_{n−1}^{(α+1)}`.
pub fn laguerre_deriv<T: Real>(params: LaguerreParams, x: T) -> T {
    if params.degree == 0 {
        return T::zero();
    }
    -laguerre_eval(LaguerreParams::new(params.degree - 1, params.alpha + 1), x)
}

/// All roots in decreasing order; for `α < 0` the `−α` exact zeros come last.
pub fn laguerre_roots<T: Real>(params: LaguerreParams) -> Result<Vec<T>> {
    let LaguerreParams { degree: n, alpha } = params;
    if n == 0 {
        return Err(Error::InvalidParameter("Laguerre roots need degree ≥ 1".into()));
    }
    if alpha < 0 {
        let p = (-alpha) as usize;
        if p > n {
            return Err(Error::InvalidParameter(format!("order {alpha} below −degree {n}: reflection undefined")));
        }
        let mut roots = if p == n { Vec::new() } else { laguerre_roots(LaguerreParams::new(n - p, -alpha))? };
        roots.extend(std::iter::repeat_n(T::zero(), p));
        return Ok(roots);
    }

    let a = T::from_i64(alpha).expect("integer representable");
    let diag = (0..n).map(|i| T::of_usize(2 * i + 1) + a).collect();
    let off = (1..n)
        .map(|i| {
            let i = T::of_usize(i);
            (i * (i + a)).sqrt()
        })
        .collect();
    let mut roots = SymTridiagonal::new(diag, off)?.eigenvalues()?;
    polish(&mut roots, n, alpha);
    Ok(roots)
}

/// Newton refinement on the recurrence; the QL eigenvalues carry only absolute accuracy,
/// which is poor in relative terms for the small roots near the hard edge.
fn polish<T: Real>(roots: &mut [T], n: usize, alpha: i64) {
    let a = T::from_i64(alpha).expect("integer representable");
    let nn = T::of_usize(n);
    for idx in 0..roots.len() {
        let lo = if idx + 1 < roots.len() { roots[idx + 1] } else { T::zero() };
        let hi = if idx > 0 { roots[idx - 1] } else { T::infinity() };
        let mut x = roots[idx];
        for _ in 0..4 {
            let ln = laguerre_recurrence(n, alpha, x);
            let lm = laguerre_recurrence(n - 1, alpha, x);
            let d = (nn * ln - (nn + a) * lm) / x;
            let step = ln / d;
            if !step.is_finite() {
                break;
            }
            let next = x - step;
            if !(next > lo && next < hi) {
                break;
            }
            x = next;
            if step.abs() <= T::epsilon() * x {
                break;
            }
        }
        roots[idx] = x;
    }
}
