use super::CrystalTable;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymTridiagonal};

/// `Q̃_m^{(k)}(l_{a,k})` for `0 ≤ m < N∧k` (rows) and the `N∧k` nonzero roots (columns).
#[derive(Debug, Clone)]
pub struct DualPolyTable {
    pub level: usize,
    pub n_center: usize,
    pub values: Matrix<f64>,
    /// `ln ⟨Q_m, Q_m⟩_k`; the norms themselves overflow for large `k, N`.
    pub log_norms: Vec<f64>,
}

impl DualPolyTable {
    /// `Q̃_m(l_{a,k})`, `m` 0-based, `a` 1-based.
    pub fn get(&self, m: usize, a: usize) -> f64 {
        self.values[(m, a - 1)]
    }

    pub fn degree_count(&self) -> usize {
        self.values.rows()
    }

    pub fn norm(&self, m: usize) -> f64 {
        self.log_norms[m].exp()
    }
}

/// `ln ⟨Q_m,Q_m⟩_k = ln[(k−m)_{m+1} (N−m)_{m+1} / (k+1)]`.
pub fn dual_log_norm(k: usize, n_center: usize, m: usize) -> f64 {
    let poch = |c: usize| (c - m..=c).map(|i| (i as f64).ln()).sum::<f64>();
    poch(k) + poch(n_center) - ((k + 1) as f64).ln()
}

/// Monic `Q_m^{(k)}(x)` from `x Q_m = Q_{m+1} + (N+k−2m−1) Q_m + (k−m)(N−m) Q_{m−1}`.
pub fn dual_poly_monic(k: usize, n_center: usize, m: usize, x: f64) -> f64 {
    let (k, n) = (k as f64, n_center as f64);
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = x - (k + n - 1.0);
    for i in 1..m {
        let fi = i as f64;
        let next = (x - (n + k - 2.0 * fi - 1.0)) * cur - (k - fi) * (n - fi) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Q̃_0 … Q̃_{count−1}` at `x`, by the recurrence renormalized with `√u_m`, `u_m = (k−m)(N−m)`.
pub fn dual_poly_normalized(k: usize, n_center: usize, x: f64, count: usize) -> Vec<f64> {
    let (kf, nf) = (k as f64, n_center as f64);
    let u = |m: usize| ((k - m) * (n_center - m)) as f64;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(((kf + 1.0) / (kf * nf)).sqrt());
    if count > 1 {
        out.push((x - (kf + nf - 1.0)) * out[0] / u(1).sqrt());
    }
    for m in 1..count.saturating_sub(1) {
        let b = nf + kf - 2.0 * m as f64 - 1.0;
        let next = ((x - b) * out[m] - u(m).sqrt() * out[m - 1]) / u(m + 1).sqrt();
        out.push(next);
    }
    out
}

fn dual_jacobi(k: usize, n_center: usize) -> Result<SymTridiagonal<f64>> {
    let count = k.min(n_center);
    SymTridiagonal::new(
        (0..count).map(|m| (n_center + k - 2 * m - 1) as f64).collect(),
        (0..count.saturating_sub(1)).map(|m| (((k - m - 1) * (n_center - m - 1)) as f64).sqrt()).collect(),
    )
}

fn eigen_column(jacobi: &SymTridiagonal<f64>, k: usize, x: f64) -> Vec<f64> {
    let z = jacobi.eigenvector_for(x);
    let scale = ((k + 1) as f64 / x).sqrt() * z[0].signum();
    z.into_iter().map(|v| scale * v).collect()
}

fn check_level(k: usize, crystal: &CrystalTable) -> Result<()> {
    if k == 0 || k > crystal.rows() {
        return Err(Error::InvalidParameter(format!("level {k} outside 1..={}", crystal.rows())));
    }
    Ok(())
}

/// `(Q̃_m^{(k)}(l_{a,k}))_{m < N∧k}` at one nonzero root (`a` 1-based); see [`dual_polys`].
pub fn dual_poly_column(k: usize, a: usize, crystal: &CrystalTable) -> Result<Vec<f64>> {
    check_level(k, crystal)?;
    if a == 0 || a > crystal.nonzero_count(k) {
        return Err(Error::InvalidParameter(format!("root index {a} is not a nonzero root of level {k}")));
    }
    Ok(eigen_column(&dual_jacobi(k, crystal.n_center())?, k, crystal.root(a, k)))
}

/// `Q̃_m^{(k)}` at the nonzero roots of level `k`.
///
/// The vector `(Q̃_m(x))_m` at a root `x` is an eigenvector of the Jacobi matrix of the dual
/// recurrence (diagonal `N+k−2m−1`, off-diagonal `√((k−m−1)(N−m−1))`); its spectral weight
/// at `e_0` is `x/(kN)`, so `Q̃_m(x) = sign·√((k+1)/x)·z_m` for the unit eigenvector `z`.
/// The forward recurrence loses orthogonality already around degree 15, this does not.
pub fn dual_polys(k: usize, crystal: &CrystalTable) -> Result<DualPolyTable> {
    check_level(k, crystal)?;
    let nc = crystal.n_center();
    let count = crystal.nonzero_count(k);
    let jacobi = dual_jacobi(k, nc)?;
    let mut values = Matrix::zeros(count, count);
    for (a, &x) in crystal.nonzero(k).iter().enumerate() {
        for (m, q) in eigen_column(&jacobi, k, x).into_iter().enumerate() {
            values[(m, a)] = q;
        }
    }
    let log_norms = (0..count).map(|m| dual_log_norm(k, nc, m)).collect();
    Ok(DualPolyTable { level: k, n_center: nc, values, log_norms })
}
