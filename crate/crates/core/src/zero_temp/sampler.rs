use super::{dual_polys, eta_variance, transition_matrix, CrystalTable};
use crate::ensembles::FluctuationArray;
use crate::error::Result;
use rand::Rng;
use rand_distr::StandardNormal;

/// Exact draw of the zero-temperature fluctuation array.
///
/// The top row is `Σ_m (m+1)^{−1/2} g_m u_m` with `u_m(b) = √(2/(n+1)) l_b Q̃_m(l_b)`
/// (orthonormal eigenvectors of its covariance); lower rows follow
/// `ξ^k = A_k ξ^{k+1} + η^k` with independent `η_{a,k} ~ N(0, 2 l_{a,k}/(k+1))`.
pub fn sample_infinity_corners<R: Rng + ?Sized>(crystal: &CrystalTable, rng: &mut R) -> Result<FluctuationArray> {
    let n = crystal.rows();
    let q = dual_polys(n, crystal)?;
    let roots = crystal.nonzero(n);
    let d = roots.len();
    let mut top = vec![0.0; n];
    let scale = (2.0 / (n + 1) as f64).sqrt();
    for m in 0..d {
        let g: f64 = rng.sample(StandardNormal);
        let c = g / ((m + 1) as f64).sqrt();
        for b in 0..d {
            top[b] += c * scale * roots[b] * q.values[(m, b)];
        }
    }
    let mut levels = vec![Vec::new(); n];
    levels[n - 1] = top;
    for k in (1..n).rev() {
        let mut xi = transition_matrix(k, crystal)?.matrix.apply(&levels[k])?;
        for (a, x) in xi.iter_mut().enumerate().take(crystal.nonzero_count(k)) {
            let g: f64 = rng.sample(StandardNormal);
            *x += g * eta_variance(a + 1, k, crystal).sqrt();
        }
        levels[k - 1] = xi;
    }
    FluctuationArray::new(crystal.n_center(), n, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn shape_and_degenerate_entries() {
        let c = CrystalTable::new(2, 5).unwrap();
        let s = sample_infinity_corners(&c, &mut stream(3, 0)).unwrap();
        for k in 1..=5 {
            assert_eq!(s.level(k).len(), k);
            assert!(s.level(k)[c.nonzero_count(k)..].iter().all(|&x| x == 0.0));
        }
    }
}
