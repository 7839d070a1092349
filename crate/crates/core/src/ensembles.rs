//! Finite-β Laguerre corners process: density, matrix-model and tridiagonal samplers, the
//! secular-equation upward step, and fluctuation extraction.

use crate::error::{Error, Result};
use crate::export::Table;
use crate::linalg::{symmetric_eigenvalues, Matrix, SymTridiagonal};
use crate::rng::chi;
use crate::zero_temp::CrystalTable;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

/// One realization `λ_{i,k}`: level `k` holds its `N∧k` positive values, decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornersSample {
    pub n_center: usize,
    pub rows: usize,
    pub beta: f64,
    pub levels: Vec<Vec<f64>>,
}

impl CornersSample {
    pub fn new(n_center: usize, rows: usize, beta: f64, levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.len() != rows {
            return Err(Error::ShapeMismatch(format!("{} levels for {rows} rows", levels.len())));
        }
        for (i, lev) in levels.iter().enumerate() {
            if lev.len() != n_center.min(i + 1) {
                return Err(Error::ShapeMismatch(format!("level {} has {} values", i + 1, lev.len())));
            }
        }
        Ok(CornersSample { n_center, rows, beta, levels })
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k - 1]
    }

    /// Strict decrease within levels and interlacing between consecutive levels.
    pub fn is_interlaced(&self) -> bool {
        let decreasing = self.levels.iter().all(|l| l.windows(2).all(|w| w[0] > w[1]));
        let interlaced = (1..self.rows).all(|k| {
            let (lo, hi) = (self.level(k), self.level(k + 1));
            lo.iter().enumerate().all(|(i, &x)| hi[i] >= x && hi.get(i + 1).is_none_or(|&y| x >= y))
        });
        decreasing && interlaced
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["k", "i", "lambda"])
            .meta("quantity", "corners sample lambda_{i,k}")
            .meta("N", self.n_center.to_string())
            .meta("n", self.rows.to_string())
            .meta("beta", self.beta.to_string());
        for (k, lev) in self.levels.iter().enumerate() {
            for (i, &x) in lev.iter().enumerate() {
                t.push(vec![(k + 1).into(), (i + 1).into(), x.into()]);
            }
        }
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

/// `ξ_{i,k}` with all `k` entries per level; entries past `N∧k` are exactly 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationArray {
    pub n_center: usize,
    pub rows: usize,
    pub levels: Vec<Vec<f64>>,
}

impl FluctuationArray {
    pub fn new(n_center: usize, rows: usize, levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.len() != rows || levels.iter().enumerate().any(|(i, l)| l.len() != i + 1) {
            return Err(Error::ShapeMismatch("fluctuation level k must have k entries".into()));
        }
        Ok(FluctuationArray { n_center, rows, levels })
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k - 1]
    }

    /// `ξ_{a,k}`, 1-based.
    pub fn get(&self, a: usize, k: usize) -> f64 {
        self.levels[k - 1][a - 1]
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["k", "i", "xi"])
            .meta("quantity", "fluctuations xi_{i,k}")
            .meta("N", self.n_center.to_string())
            .meta("n", self.rows.to_string());
        for (k, lev) in self.levels.iter().enumerate() {
            for (i, &x) in lev.iter().enumerate() {
                t.push(vec![(k + 1).into(), (i + 1).into(), x.into()]);
            }
        }
        t
    }
}

/// Log of the unnormalized joint density
/// `Π λ_{i,N}^{β/2−1} e^{−βλ_{i,n}/2} · Δ(λ^n) · Π_{k<n} Δ(λ^k)^{2−β} · Π_{k<n} Π_{a,b} |λ_{a,k}−λ_{b,k+1}|^{β/2−1}`.
pub fn log_density(sample: &CornersSample, beta: f64) -> Result<f64> {
    let (nc, n) = (sample.n_center, sample.rows);
    if n < nc {
        return Err(Error::Precondition(format!("density needs n ≥ N (got N={nc}, n={n})")));
    }
    let log_pos = |x: f64, what: &str| -> Result<f64> {
        if x > 0.0 {
            Ok(x.ln())
        } else {
            Err(Error::Degenerate(format!("{what} is not positive")))
        }
    };
    let half = 0.5 * beta;
    let mut s = 0.0;
    for &x in sample.level(nc) {
        s += (half - 1.0) * log_pos(x, "eigenvalue")?;
    }
    let top = sample.level(n);
    for (i, &x) in top.iter().enumerate() {
        s -= half * x;
        for &y in &top[i + 1..] {
            s += log_pos(x - y, "top-level gap")?;
        }
    }
    for k in 1..n {
        let lev = sample.level(k);
        for (i, &x) in lev.iter().enumerate() {
            for &y in &lev[i + 1..] {
                s += (2.0 - beta) * log_pos(x - y, "level gap")?;
            }
            for &y in sample.level(k + 1) {
                s += (half - 1.0) * log_pos((x - y).abs(), "cross-level gap")?;
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixBeta {
    Real,
    Complex,
}

impl MatrixBeta {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta == 1.0 {
            Ok(MatrixBeta::Real)
        } else if beta == 2.0 {
            Ok(MatrixBeta::Complex)
        } else {
            Err(Error::InvalidParameter(format!("matrix model needs β ∈ {{1, 2}}, got {beta}")))
        }
    }
}

/// Eigenvalues of the Hermitian matrix `re + i·im` via the real embedding `[[re, −im], [im, re]]`,
/// whose spectrum is that of the original with every value doubled.
fn hermitian_eigenvalues(re: &Matrix<f64>, im: Option<&Matrix<f64>>) -> Result<Vec<f64>> {
    let Some(im) = im else {
        return symmetric_eigenvalues(re);
    };
    let d = re.rows();
    let big = Matrix::from_fn(2 * d, 2 * d, |i, j| match (i < d, j < d) {
        (true, true) => re[(i, j)],
        (false, false) => re[(i - d, j - d)],
        (true, false) => -im[(i, j - d)],
        (false, true) => im[(i - d, j)],
    });
    Ok(symmetric_eigenvalues(&big)?.into_iter().step_by(2).collect())
}

/// Nonzero squared singular values of the leading `N × k` blocks of one Gaussian `N × n`
/// matrix with `E|x|² = 1` entries (real, or complex with independent `N(0, ½)` parts).
pub fn sample_matrix_corners<R: Rng + ?Sized>(
    n_center: usize,
    rows: usize,
    beta: f64,
    rng: &mut R,
) -> Result<CornersSample> {
    let kind = MatrixBeta::from_beta(beta)?;
    if n_center == 0 || rows == 0 {
        return Err(Error::InvalidParameter("N and n must be positive".into()));
    }
    let sd = if kind == MatrixBeta::Complex { 0.5f64.sqrt() } else { 1.0 };
    let draw = |r: &mut R| -> f64 { sd * r.sample::<f64, _>(StandardNormal) };
    let xr = Matrix::from_fn(n_center, rows, |_, _| draw(rng));
    let xi = match kind {
        MatrixBeta::Complex => Some(Matrix::from_fn(n_center, rows, |_, _| draw(rng))),
        MatrixBeta::Real => None,
    };
    let mut levels = Vec::with_capacity(rows);
    for k in 1..=rows {
        // Gram of the smaller side: X_k* X_k (k×k) or X_k X_k* (N×N).
        let (d, inner, by_col) = if k <= n_center { (k, n_center, true) } else { (n_center, k, false) };
        let entry = |m: &Matrix<f64>, i: usize, t: usize| if by_col { m[(t, i)] } else { m[(i, t)] };
        let mut gre = Matrix::zeros(d, d);
        let mut gim = xi.as_ref().map(|_| Matrix::zeros(d, d));
        for i in 0..d {
            for j in 0..d {
                let mut re = 0.0;
                let mut im = 0.0;
                for t in 0..inner {
                    let (ar, br) = (entry(&xr, i, t), entry(&xr, j, t));
                    match &xi {
                        None => re += ar * br,
                        Some(xim) => {
                            let (ai, bi) = (entry(xim, i, t), entry(xim, j, t));
                            // X*X: conj(x_i)·x_j ; XX*: x_i·conj(x_j).
                            let (ai, bi) = if by_col { (-ai, bi) } else { (ai, -bi) };
                            re += ar * br - ai * bi;
                            im += ar * bi + ai * br;
                        }
                    }
                }
                gre[(i, j)] = re;
                if let Some(g) = gim.as_mut() {
                    g[(i, j)] = im;
                }
            }
        }
        levels.push(hermitian_eigenvalues(&gre, gim.as_ref())?);
    }
    CornersSample::new(n_center, rows, beta, levels)
}

/// One level of the Laguerre β-ensemble (`N∧k` values, `α = |N−k|`) from the bidiagonal
/// model: `B` has diagonal `χ_{β(α+m−i+1)}` and subdiagonal `χ_{β(m−i)}`; the level is
/// `eig(BBᵀ)/β`.
pub fn tridiagonal_level<R: Rng + ?Sized>(k: usize, n_center: usize, beta: f64, rng: &mut R) -> Result<Vec<f64>> {
    if k == 0 || n_center == 0 || !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("need k, N ≥ 1 and β > 0 (k={k}, N={n_center}, β={beta})")));
    }
    let m = k.min(n_center);
    let alpha = k.abs_diff(n_center);
    let d: Vec<f64> = (1..=m).map(|i| chi(beta * (alpha + m - i + 1) as f64, rng)).collect();
    let e: Vec<f64> = (1..m).map(|i| chi(beta * (m - i) as f64, rng)).collect();
    let diag = (0..m).map(|i| (d[i] * d[i] + if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 }) / beta).collect();
    let off = (0..m.saturating_sub(1)).map(|i| d[i] * e[i] / beta).collect();
    SymTridiagonal::new(diag, off)?.eigenvalues()
}

/// Roots of `1 − Σ w_i/(z − λ_i)` for a decreasing `level` and nonnegative weights: one in
/// each gap `(λ_{i+1}, λ_i)` and one in `(λ_1, λ_1 + Σw]`. A zero weight pins its `λ_i`.
pub fn secular_roots(level: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    if level.len() != weights.len() {
        return Err(Error::ShapeMismatch(format!("{} values, {} weights", level.len(), weights.len())));
    }
    if level.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::Precondition("level must be strictly decreasing".into()));
    }
    let (active, pinned): (Vec<usize>, Vec<usize>) = (0..level.len()).partition(|&i| weights[i] > 0.0);
    let poles: Vec<f64> = active.iter().map(|&i| level[i]).collect();
    let w: Vec<f64> = active.iter().map(|&i| weights[i]).collect();
    let mut out: Vec<f64> = pinned.iter().map(|&i| level[i]).collect();
    let total: f64 = w.iter().sum();
    let f = |z: f64| 1.0 - poles.iter().zip(&w).map(|(p, wi)| wi / (z - p)).sum::<f64>();
    let df = |z: f64| poles.iter().zip(&w).map(|(p, wi)| wi / (z - p).powi(2)).sum::<f64>();
    for i in 0..poles.len() {
        let (lo, hi) = if i == 0 { (poles[0], poles[0] + total) } else { (poles[i], poles[i - 1]) };
        out.push(increasing_root(&f, &df, lo, hi, i == 0)?);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Root of an increasing function on `(lo, hi)` with `f(lo⁺) = −∞`; safeguarded Newton.
fn increasing_root(
    f: &impl Fn(f64) -> f64,
    df: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    closed_hi: bool,
) -> Result<f64> {
    if closed_hi && f(hi) <= 0.0 {
        return Ok(hi);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / df(x);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-15 * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= 1e-15 * hi.abs() {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Bracket(format!("secular root in ({lo}, {hi}) did not settle")))
}

/// One step `λ^k → λ^{k+1}` for `k ≥ N`: weights `|c_i|² ~ (1/β) χ²_β`, new level = secular roots.
pub fn sample_upward_step<R: Rng + ?Sized>(level: &[f64], beta: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("β must be positive, got {beta}")));
    }
    if level.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Precondition("level must be positive".into()));
    }
    let gamma = Gamma::new(0.5 * beta, 2.0 / beta).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let w: Vec<f64> = level.iter().map(|_| gamma.sample(rng)).collect();
    secular_roots(level, &w)
}

/// `√β (λ_{i,k} − l_{i,k})`, zero-padded to `k` entries per level.
pub fn scaled_fluctuations(sample: &CornersSample, crystal: &CrystalTable, beta: f64) -> Result<FluctuationArray> {
    if sample.n_center != crystal.n_center() || sample.rows != crystal.rows() {
        return Err(Error::ShapeMismatch(format!(
            "sample (N={}, n={}) vs crystal (N={}, n={})",
            sample.n_center,
            sample.rows,
            crystal.n_center(),
            crystal.rows()
        )));
    }
    let sb = beta.sqrt();
    let levels = (1..=sample.rows)
        .map(|k| {
            let mut v = vec![0.0; k];
            for (i, (&x, &l)) in sample.level(k).iter().zip(crystal.nonzero(k)).enumerate() {
                v[i] = sb * (x - l);
            }
            v
        })
        .collect();
    FluctuationArray::new(sample.n_center, sample.rows, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::mean_se;

    #[test]
    fn density_trivial_cases() {
        let s = CornersSample::new(1, 1, 2.0, vec![vec![0.7]]).unwrap();
        assert!((log_density(&s, 2.0).unwrap() + 0.7).abs() < 1e-15);
        let s = CornersSample::new(1, 2, 2.0, vec![vec![0.4], vec![1.3]]).unwrap();
        assert!((log_density(&s, 2.0).unwrap() + 1.3).abs() < 1e-15);
    }

    #[test]
    fn density_matches_naive_product() {
        let beta = 4.0;
        let l1 = [2.0];
        let l2 = [3.1, 0.9];
        let s = CornersSample::new(2, 2, beta, vec![l1.to_vec(), l2.to_vec()]).unwrap();
        // Direct product of the factors, then log.
        let mut p = 1.0;
        for x in l2 {
            p *= x.powf(beta / 2.0 - 1.0) * (-beta * x / 2.0).exp();
        }
        p *= l2[0] - l2[1];
        for y in l2 {
            p *= (l1[0] - y).abs().powf(beta / 2.0 - 1.0);
        }
        assert!((log_density(&s, beta).unwrap() - p.ln()).abs() < 1e-13);
    }

    #[test]
    fn density_rejects_coincidence() {
        let s = CornersSample::new(1, 2, 1.0, vec![vec![1.0], vec![1.0]]).unwrap();
        assert!(matches!(log_density(&s, 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn matrix_sampler_interlaces() {
        let mut rng = stream(11, 0);
        for beta in [1.0, 2.0] {
            for _ in 0..1000 {
                let s = sample_matrix_corners(3, 6, beta, &mut rng).unwrap();
                assert!(s.is_interlaced());
            }
        }
        assert!(sample_matrix_corners(2, 2, 4.0, &mut rng).is_err());
    }

    #[test]
    fn one_by_one_means() {
        // λ_{1,1} = |x|² with E|x|² = 1 for both real and complex entries.
        let mut rng = stream(5, 0);
        for beta in [1.0, 2.0] {
            let draws: Vec<f64> =
                (0..100_000).map(|_| sample_matrix_corners(1, 1, beta, &mut rng).unwrap().levels[0][0]).collect();
            let (m, se) = mean_se(&draws);
            assert!((m - 1.0).abs() < 3.0 * se, "β={beta} mean={m} se={se}");
        }
        let draws: Vec<f64> = (0..100_000).map(|_| tridiagonal_level(1, 1, 2.0, &mut rng).unwrap()[0]).collect();
        let (m, se) = mean_se(&draws);
        assert!((m - 1.0).abs() < 3.0 * se);
    }

    #[test]
    fn tridiagonal_freezes_at_roots() {
        let mut rng = stream(6, 0);
        let draws: Vec<f64> =
            (0..2000).map(|_| tridiagonal_level(3, 3, 1e6, &mut rng).unwrap().iter().sum::<f64>() / 3.0).collect();
        let (m, _) = mean_se(&draws);
        assert!((m - 3.0).abs() < 1e-2);
    }

    #[test]
    fn secular_step_cases() {
        assert_eq!(secular_roots(&[2.0], &[0.5]).unwrap(), vec![2.5]);
        let lev = [5.0, 3.0, 1.0];
        assert_eq!(secular_roots(&lev, &[0.0; 3]).unwrap(), lev.to_vec());
        let w = [0.3, 1.7, 0.02];
        let out = secular_roots(&lev, &w).unwrap();
        assert!(out[0] > 5.0 && out[1] < 5.0 && out[1] > 3.0 && out[2] < 3.0 && out[2] > 1.0);
        let trace = out.iter().sum::<f64>() - lev.iter().sum::<f64>();
        assert!((trace - w.iter().sum::<f64>()).abs() < 1e-10);
        let mixed = secular_roots(&lev, &[0.4, 0.0, 0.1]).unwrap();
        assert!(mixed.contains(&3.0));
    }

    #[test]
    fn fluctuations_of_crystal_vanish() {
        let c = CrystalTable::new(2, 3).unwrap();
        let levels = (1..=3).map(|k| c.nonzero(k).to_vec()).collect();
        let s = CornersSample::new(2, 3, 1.0, levels).unwrap();
        let f = scaled_fluctuations(&s, &c, 1.0).unwrap();
        assert!(f.levels.iter().flatten().all(|&x| x == 0.0));
        let mut s2 = s.clone();
        s2.levels[1][0] += 0.5;
        assert_eq!(scaled_fluctuations(&s2, &c, 1.0).unwrap().get(1, 2), 0.5);
        let wrong = CrystalTable::new(2, 4).unwrap();
        assert!(scaled_fluctuations(&s, &wrong, 1.0).is_err());
    }
}
