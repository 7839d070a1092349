use crate::error::Result;
use crate::quad::gauss_legendre;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Monic `Q_m^{(k)}(x)` from its double-contour representation
/// `(−1)^m (k∧N−m)_{m+1}/(2πi) ∮ ∫_0^t f(x,s) s^{−m} / f(x,t) ds dt / (s(1−s) t(1−t))`,
/// `f(x,s) = e^{x/(1−s)} (1−s)^{|k−N|} s^{k∧N}`. Trapezoid rule with `outer` nodes on
/// `|t| = 1/2`, `inner`-point Gauss–Legendre on the segment `[0, t]`.
///
/// Only a cross-check of the recurrence; accurate for small `k, N`.
pub fn dual_poly_contour(k: usize, n_center: usize, m: usize, x: f64, outer: usize, inner: usize) -> Result<f64> {
    let kn = k.min(n_center) as i32;
    let d = k.abs_diff(n_center) as i32;
    let one = Complex64::new(1.0, 0.0);
    let f = |s: Complex64| (x / (one - s)).exp() * (one - s).powi(d) * s.powi(kn);
    let (gx, gw) = gauss_legendre::<f64>(inner)?;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..outer {
        let theta = 2.0 * PI * j as f64 / outer as f64;
        let t = Complex64::from_polar(0.5, theta);
        let dt = Complex64::new(0.0, 1.0) * t * (2.0 * PI / outer as f64);
        let mut inner_sum = Complex64::new(0.0, 0.0);
        for (&u, &w) in gx.iter().zip(&gw) {
            let s = t * (0.5 * (u + 1.0));
            // s^{k∧N} / s^{m+1} with m < k∧N stays polynomial at s = 0.
            inner_sum += w * f(s) * s.powi(-(m as i32)) / (s * (one - s));
        }
        inner_sum *= t * 0.5;
        total += inner_sum / f(t) / (t * (one - t)) * dt;
    }
    let poch: f64 = (0..=m).map(|i| (kn as usize - m + i) as f64).product();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let value = total * (sign * poch) / Complex64::new(0.0, 2.0 * PI);
    Ok(value.re)
}
