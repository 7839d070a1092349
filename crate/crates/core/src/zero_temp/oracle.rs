//! Covariances from the Gaussian density directly, independent of the dual polynomials.
//!
//! Expanding the finite-β density around the crystal gives `exp(−Q(ξ))` with
//! `Q = ¼ Σ_{i≤N} (ξ_{i,N}/l_{i,N})²
//!    − ½ Σ_{k<n} Σ_{i<j≤N∧k} ((ξ_{i,k}−ξ_{j,k})/(l_{i,k}−l_{j,k}))²
//!    + ¼ Σ_{k<n} Σ_{a≤N∧k, b≤N∧(k+1)} ((ξ_{a,k}−ξ_{b,k+1})/(l_{a,k}−l_{b,k+1}))²`.
//! The level-`N` term comes from the `λ_{i,N}^{β/2−1}` factor, the only non-linear
//! single-particle weight. The precision matrix is the Hessian of `Q`.

use super::{CrystalTable, InfinityCovariance};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};

fn add_square(p: &mut Matrix<f64>, coef: f64, terms: &[(usize, f64)]) {
    for &(i, ci) in terms {
        for &(j, cj) in terms {
            p[(i, j)] += 2.0 * coef * ci * cj;
        }
    }
}

fn require_full(crystal: &CrystalTable) -> Result<()> {
    if crystal.rows() < crystal.n_center() {
        return Err(Error::Precondition(format!(
            "density is defined for n ≥ N (got N={}, n={})",
            crystal.n_center(),
            crystal.rows()
        )));
    }
    Ok(())
}

/// Precision matrix over [`InfinityCovariance::index_set`].
pub fn precision_matrix(crystal: &CrystalTable) -> Result<(Vec<(usize, usize)>, Matrix<f64>)> {
    require_full(crystal)?;
    let index = InfinityCovariance::index_set(crystal);
    let pos = |a: usize, k: usize| index.iter().position(|&p| p == (a, k)).expect("index present");
    let (nc, n) = (crystal.n_center(), crystal.rows());
    let mut p = Matrix::zeros(index.len(), index.len());
    for i in 1..=nc {
        add_square(&mut p, 0.25 / crystal.root(i, nc).powi(2), &[(pos(i, nc), 1.0)]);
    }
    for k in 1..n {
        let m = crystal.nonzero_count(k);
        for i in 1..=m {
            for j in i + 1..=m {
                let d = crystal.root(i, k) - crystal.root(j, k);
                add_square(&mut p, -0.5 / (d * d), &[(pos(i, k), 1.0), (pos(j, k), -1.0)]);
            }
        }
        for a in 1..=m {
            for b in 1..=crystal.nonzero_count(k + 1) {
                let d = crystal.root(a, k) - crystal.root(b, k + 1);
                add_square(&mut p, 0.25 / (d * d), &[(pos(a, k), 1.0), (pos(b, k + 1), -1.0)]);
            }
        }
    }
    Ok((index, p))
}

/// Covariance by Cholesky inversion of [`precision_matrix`].
pub fn oracle_covariance(crystal: &CrystalTable) -> Result<InfinityCovariance> {
    let (index, p) = precision_matrix(crystal)?;
    let matrix = Cholesky::new(&p)?.inverse();
    Ok(InfinityCovariance { n_center: crystal.n_center(), rows: crystal.rows(), index, matrix })
}

/// Precision of the top row alone, from its marginal density
/// `exp(−(n−N+1)/4 Σ (ξ_i/l_i)² − ½ Σ_{i<j} ((ξ_i−ξ_j)/(l_i−l_j))²)`.
pub fn top_level_precision(crystal: &CrystalTable) -> Result<Matrix<f64>> {
    require_full(crystal)?;
    let (nc, n) = (crystal.n_center(), crystal.rows());
    let l = crystal.nonzero(n);
    let mut p = Matrix::zeros(nc, nc);
    let c = (n - nc + 1) as f64 / 4.0;
    for i in 0..nc {
        add_square(&mut p, c / (l[i] * l[i]), &[(i, 1.0)]);
        for j in i + 1..nc {
            add_square(&mut p, 0.5 / (l[i] - l[j]).powi(2), &[(i, 1.0), (j, -1.0)]);
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_temp::{covariance_matrix, top_level_covariance};

    #[test]
    fn hand_computed_precision() {
        let c = CrystalTable::new(1, 2).unwrap();
        let (_, p) = precision_matrix(&c).unwrap();
        let want = Matrix::from_rows(vec![vec![1.0, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(p.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn small_cases_agree_with_spectral() {
        for (nc, n) in [(1, 1), (2, 3), (3, 5), (4, 4)] {
            let c = CrystalTable::new(nc, n).unwrap();
            let o = oracle_covariance(&c).unwrap();
            let s = covariance_matrix(&c).unwrap();
            assert!(o.matrix.max_abs_diff(&s.matrix) < 1e-9);
        }
    }

    #[test]
    fn top_marginal_agrees() {
        for (nc, n) in [(1, 1), (1, 4), (3, 3), (3, 7), (6, 10)] {
            let c = CrystalTable::new(nc, n).unwrap();
            let inv = Cholesky::new(&top_level_precision(&c).unwrap()).unwrap().inverse();
            let top = top_level_covariance(&c).unwrap();
            assert!(inv.max_abs_diff(&top) < 1e-9 * (1.0 + top.trace()), "N={nc} n={n}");
        }
    }

    #[test]
    fn rejects_short_tables() {
        let c = CrystalTable::new(3, 2).unwrap();
        assert!(precision_matrix(&c).is_err());
    }
}
