use super::{dual_polys, CrystalTable};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Transition probabilities from level `from` to level `to`. Rows and columns are indexed
/// by the root multisets (decreasing, zeros last) unless stated otherwise.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub from: usize,
    pub to: usize,
    pub matrix: Matrix<f64>,
}

impl Kernel {
    /// `K(a→b)`, 1-based.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[(a - 1, b - 1)]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.matrix.rows()).map(|i| self.matrix.row(i).iter().sum()).collect()
    }
}

fn check_level(k: usize, crystal: &CrystalTable) -> Result<()> {
    if k == 0 || k > crystal.rows() {
        return Err(Error::InvalidParameter(format!("level {k} outside 1..={}", crystal.rows())));
    }
    Ok(())
}

/// One-step matrix `A_k` (`k × (k+1)`).
///
/// Nonzero source `l_a`: `α_{a,b} = (l_a − l_b)^{−2} · l_a/(k+1)` over every target, zeros
/// included (`Σ_b (l_a − l_b)^{−2} = (k+1)/l_a`). Zero source: uniform over the `k+1−N` zero
/// targets, which is the normalization that makes the row stochastic.
pub fn transition_matrix(k: usize, crystal: &CrystalTable) -> Result<Kernel> {
    check_level(k, crystal)?;
    if k >= crystal.rows() {
        return Err(Error::InvalidParameter(format!("no level above {k} in a table with {} rows", crystal.rows())));
    }
    let src = crystal.level(k);
    let dst = crystal.level(k + 1);
    let nz = crystal.nonzero_count(k);
    let zeros_next = crystal.zero_multiplicity(k + 1);
    let mut m = Matrix::zeros(k, k + 1);
    for (a, &la) in src.iter().enumerate() {
        if a < nz {
            let scale = la / (k + 1) as f64;
            for (b, &lb) in dst.iter().enumerate() {
                m[(a, b)] = scale / (la - lb).powi(2);
            }
        } else {
            for b in k + 1 - zeros_next..=k {
                m[(a, b)] = 1.0 / zeros_next as f64;
            }
        }
    }
    Ok(Kernel { from: k, to: k + 1, matrix: m })
}

/// `K^{k,l} = A_k ⋯ A_{l−1}`; the identity for `k = l`.
pub fn diffusion_kernel(k: usize, l: usize, crystal: &CrystalTable) -> Result<Kernel> {
    check_level(k, crystal)?;
    check_level(l, crystal)?;
    if l < k {
        return Err(Error::InvalidParameter(format!("kernel from level {k} down to {l}")));
    }
    let mut m = Matrix::identity(k);
    for j in k..l {
        m = m.matmul(&transition_matrix(j, crystal)?.matrix)?;
    }
    Ok(Kernel { from: k, to: l, matrix: m })
}

/// `K^{k,r}` restricted to nonzero roots, from the dual-polynomial expansion
/// `K(a→b) = l_a/√((k+1)(r+1)) Σ_m Q̃_m^{(r)}(l_b) Q̃_m^{(k)}(l_a) Π_{j=k}^{r−1} (1−(m+1)/(j+1))^{1/2}`.
pub fn diffusion_kernel_spectral(k: usize, r: usize, crystal: &CrystalTable) -> Result<Kernel> {
    check_level(k, crystal)?;
    check_level(r, crystal)?;
    if r < k {
        return Err(Error::InvalidParameter(format!("kernel from level {k} down to {r}")));
    }
    let qk = dual_polys(k, crystal)?;
    let qr = dual_polys(r, crystal)?;
    let (na, nb) = (crystal.nonzero_count(k), crystal.nonzero_count(r));
    let decay: Vec<f64> =
        (0..na).map(|m| (k..r).map(|j| (1.0 - (m + 1) as f64 / (j + 1) as f64).sqrt()).product()).collect();
    let pre = 1.0 / (((k + 1) * (r + 1)) as f64).sqrt();
    let roots = crystal.nonzero(k);
    let matrix = Matrix::from_fn(na, nb, |a, b| {
        let s: f64 = (0..na).map(|m| qr.values[(m, b)] * qk.values[(m, a)] * decay[m]).sum();
        roots[a] * pre * s
    });
    Ok(Kernel { from: k, to: r, matrix })
}

/// `(D_k f)(y) = Σ_x P_k(x→y) f(x)` for `f` on the level-`k` multiset; `f` must take a
/// single value on the repeated zero root.
pub fn apply_dk(f: &[f64], k: usize, crystal: &CrystalTable) -> Result<Vec<f64>> {
    check_level(k, crystal)?;
    if f.len() != k {
        return Err(Error::ShapeMismatch(format!("{} values for a level with {k} roots", f.len())));
    }
    let nz = crystal.nonzero_count(k);
    if f[nz..].windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Precondition("function must agree on equal roots".into()));
    }
    transition_matrix(k, crystal)?.matrix.apply_left(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_temp::dual_poly_monic;

    #[test]
    fn first_transition_rows() {
        let c = CrystalTable::new(1, 2).unwrap();
        let a = transition_matrix(1, &c).unwrap();
        assert!((a.get(1, 1) - 0.5).abs() < 1e-15 && (a.get(1, 2) - 0.5).abs() < 1e-15);

        for n in 2..8 {
            let c = CrystalTable::new(n, 2).unwrap();
            let s: f64 = c.level(2).iter().map(|lb| (n as f64 - lb).powi(-2)).sum();
            assert!((s - 2.0 / n as f64).abs() < 1e-14);
        }

        let c = CrystalTable::new(2, 4).unwrap();
        let a = transition_matrix(3, &c).unwrap();
        assert_eq!(a.matrix.row(2), &[0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn stochastic_rows() {
        for n in [1, 5, 17, 40] {
            let c = CrystalTable::new(n, 60).unwrap();
            for k in 1..60 {
                let a = transition_matrix(k, &c).unwrap();
                for s in a.row_sums() {
                    assert!((s - 1.0).abs() < 1e-12, "N={n} k={k} sum={s}");
                }
                assert!(a.matrix.as_slice().iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn factorization_and_identity() {
        let c = CrystalTable::new(4, 9).unwrap();
        assert_eq!(diffusion_kernel(3, 3, &c).unwrap().matrix, Matrix::identity(3));
        let k = diffusion_kernel(2, 9, &c).unwrap();
        let left = diffusion_kernel(2, 5, &c).unwrap();
        let right = diffusion_kernel(5, 9, &c).unwrap();
        assert!(left.matrix.matmul(&right.matrix).unwrap().max_abs_diff(&k.matrix) < 1e-12);
    }

    #[test]
    fn spectral_matches_product() {
        for (n, rows) in [(3, 3), (2, 2), (3, 7), (5, 9)] {
            let c = CrystalTable::new(n, rows).unwrap();
            for k in 1..=rows {
                for r in k..=rows {
                    let direct = diffusion_kernel(k, r, &c).unwrap();
                    let spec = diffusion_kernel_spectral(k, r, &c).unwrap();
                    for a in 1..=c.nonzero_count(k) {
                        let mut nonzero_sum = 0.0;
                        for b in 1..=c.nonzero_count(r) {
                            assert!((direct.get(a, b) - spec.get(a, b)).abs() < 1e-9);
                            nonzero_sum += spec.get(a, b);
                        }
                        // Mass reaching the zero roots is missing from the nonzero block.
                        let to_zero: f64 = (c.nonzero_count(r) + 1..=r).map(|b| direct.get(a, b)).sum();
                        assert!((nonzero_sum + to_zero - 1.0).abs() < 1e-9);
                        if r <= n {
                            assert!((nonzero_sum - 1.0).abs() < 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dk_eigenfunctions() {
        let c = CrystalTable::new(3, 8).unwrap();
        for k in 1..8 {
            let ones = vec![1.0; k];
            let d1 = apply_dk(&ones, k, &c).unwrap();
            assert!(d1.iter().all(|v| (v - k as f64 / (k + 1) as f64).abs() < 1e-12));
            for m in 0..c.nonzero_count(k) {
                let f: Vec<f64> = c.level(k).iter().map(|&x| dual_poly_monic(k, 3, m, x)).collect();
                let g = apply_dk(&f, k, &c).unwrap();
                let lam = 1.0 - (m + 1) as f64 / (k + 1) as f64;
                for (y, gy) in c.level(k + 1).iter().zip(&g) {
                    let want = lam * dual_poly_monic(k + 1, 3, m, *y);
                    assert!((gy - want).abs() < 1e-9 * (1.0 + want.abs()), "k={k} m={m}");
                }
            }
        }
        let bad = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(matches!(apply_dk(&bad, 5, &c), Err(Error::Precondition(_))));
    }
}
