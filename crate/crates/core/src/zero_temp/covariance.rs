use super::{dual_poly_column, dual_polys, CrystalTable};
use crate::error::{Error, Result};
use crate::export::Table;
use crate::linalg::{symmetric_eigenvalues, Matrix};

/// `Var(η_{a,k}) = 2 l_{a,k}/(k+1)`; zero for the degenerate zero roots.
pub fn eta_variance(a: usize, k: usize, crystal: &CrystalTable) -> f64 {
    if a > crystal.nonzero_count(k) {
        return 0.0;
    }
    2.0 * crystal.root(a, k) / (k + 1) as f64
}

/// `ln Π_{j=k}^{n−1} (1 − (m+1)/(j+1))^{1/2}` for every `k` in `lo..=n` (index `k − lo`).
fn half_log_tail(m: usize, lo: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n - lo + 1];
    for j in (lo..n).rev() {
        out[j - lo] = out[j + 1 - lo] + 0.5 * (1.0 - (m + 1) as f64 / (j + 1) as f64).ln();
    }
    out
}

/// `Cov(ξ_{a,k}, ξ_{a',k'})` from the dual-polynomial expansion. With `k ≥ k'`,
/// `ℓ = l_{a,k}`, `ℓ' = l_{a',k'}`, `g_m(i,j) = Π_{i≤s<j}(1−(m+1)/(s+1))^{1/2}`:
///
/// `Σ_{m<k'∧N} Q̃_m^{(k)}(ℓ) Q̃_m^{(k')}(ℓ') / √((k+1)(k'+1)) ·
///   [2ℓℓ'/(m+1) · g_m(k,n) g_m(k',n) + Σ_{r=k}^{n−1} 2ℓℓ'/(r+1) · g_m(k,r) g_m(k',r)]`.
///
/// Entries involving a zero root are 0.
pub fn covariance(a: usize, k: usize, a2: usize, k2: usize, crystal: &CrystalTable) -> Result<f64> {
    let n = crystal.rows();
    for (i, lev) in [(a, k), (a2, k2)] {
        if lev == 0 || lev > n || i == 0 || i > lev {
            return Err(Error::InvalidParameter(format!("index ({i},{lev}) outside the {n}-row array")));
        }
    }
    let ((a, k), (a2, k2)) = if k >= k2 { ((a, k), (a2, k2)) } else { ((a2, k2), (a, k)) };
    if a > crystal.nonzero_count(k) || a2 > crystal.nonzero_count(k2) {
        return Ok(0.0);
    }
    let (l1, l2) = (crystal.root(a, k), crystal.root(a2, k2));
    let count = crystal.nonzero_count(k2);
    let q1 = dual_poly_column(k, a, crystal)?;
    let q2 = dual_poly_column(k2, a2, crystal)?;
    let pre = 2.0 * l1 * l2 / (((k + 1) * (k2 + 1)) as f64).sqrt();
    let mut total = 0.0;
    for m in 0..count {
        let tail = half_log_tail(m, k2, n);
        let t = |lev: usize| tail[lev - k2];
        let mut bracket = (t(k) + t(k2)).exp() / (m + 1) as f64;
        for r in k..n {
            bracket += (t(k) - t(r) + t(k2) - t(r)).exp() / (r + 1) as f64;
        }
        total += q1[m] * q2[m] * bracket;
    }
    Ok(pre * total)
}

/// Covariance of the top row `ξ^n` from its eigen-decomposition: eigenvalues `1/(m+1)`
/// (×2), eigenvectors `√(2/(n+1))·l_b·Q̃_m(l_b)` up to the factor, i.e.
/// `cov(ξ_b, ξ_b') = 2 l_b l_b'/(n+1) Σ_m Q̃_m(l_b) Q̃_m(l_b')/(m+1)`.
pub fn top_level_covariance(crystal: &CrystalTable) -> Result<Matrix<f64>> {
    let n = crystal.rows();
    let q = dual_polys(n, crystal)?;
    let roots = crystal.nonzero(n);
    let d = roots.len();
    Ok(Matrix::from_fn(d, d, |b, b2| {
        let s: f64 = (0..d).map(|m| q.values[(m, b)] * q.values[(m, b2)] / (m + 1) as f64).sum();
        2.0 * roots[b] * roots[b2] / (n + 1) as f64 * s
    }))
}

/// Full covariance over the nondegenerate indices `(a,k)`, `a ≤ N∧k`, ordered by level then `a`.
#[derive(Debug, Clone)]
pub struct InfinityCovariance {
    pub n_center: usize,
    pub rows: usize,
    pub index: Vec<(usize, usize)>,
    pub matrix: Matrix<f64>,
}

impl InfinityCovariance {
    pub fn index_set(crystal: &CrystalTable) -> Vec<(usize, usize)> {
        (1..=crystal.rows()).flat_map(|k| (1..=crystal.nonzero_count(k)).map(move |a| (a, k))).collect()
    }

    pub fn position(&self, a: usize, k: usize) -> Option<usize> {
        self.index.iter().position(|&p| p == (a, k))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*symmetric_eigenvalues(&self.matrix)?.last().unwrap_or(&0.0))
    }

    /// Square CSV: first column is the row index `(a,k)`, header holds the column indices.
    pub fn to_table(&self, method: &str) -> Table {
        let mut cols = vec!["index".to_string()];
        cols.extend(self.index.iter().map(|(a, k)| format!("({a};{k})")));
        let mut t = Table::new(cols)
            .meta("quantity", "covariance of xi_{a,k} in the zero-temperature limit")
            .meta("method", method)
            .meta("N", self.n_center.to_string())
            .meta("n", self.rows.to_string());
        for (i, (a, k)) in self.index.iter().enumerate() {
            let mut row = vec![format!("({a};{k})").into()];
            row.extend(self.matrix.row(i).iter().map(|&v| v.into()));
            t.push(row);
        }
        t
    }
}

pub fn covariance_matrix(crystal: &CrystalTable) -> Result<InfinityCovariance> {
    let index = InfinityCovariance::index_set(crystal);
    let d = index.len();
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let (a, k) = index[i];
            let (a2, k2) = index[j];
            let v = covariance(a, k, a2, k2, crystal)?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(InfinityCovariance { n_center: crystal.n_center(), rows: crystal.rows(), index, matrix: m })
}
