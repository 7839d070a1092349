use crate::error::{Error, Result};
use crate::specfun::{laguerre_eval, laguerre_roots, LaguerreParams};
use serde::{Deserialize, Serialize};

/// Roots `l_{i,k}` of `L_k^{(N−k)}` for `k = 1..n`, each level decreasing.
///
/// Level `k` stores all `k` roots of `P_k` with multiplicity: the `N∧k` positive ones first,
/// then `max(k−N, 0)` entries that are exactly `0.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalTable {
    n_center: usize,
    rows: usize,
    levels: Vec<Vec<f64>>,
}

impl CrystalTable {
    pub fn new(n_center: usize, rows: usize) -> Result<Self> {
        if n_center == 0 || rows == 0 {
            return Err(Error::InvalidParameter(format!("crystal needs N ≥ 1 and n ≥ 1 (got N={n_center}, n={rows})")));
        }
        let levels = (1..=rows)
            .map(|k| laguerre_roots(LaguerreParams::new(k, n_center as i64 - k as i64)))
            .collect::<Result<Vec<_>>>()?;
        let table = CrystalTable { n_center, rows, levels };
        table.check_appell()?;
        Ok(table)
    }

    /// `−(k+1) L_{k+1}^{(N−k−1)} = (x+k−N) L_k^{(N−k)} + x L_{k−1}^{(N−k+1)}`, i.e. the
    /// monic relation `P_{k+1} = (x+k−N) P_k − x P_k'`, at three points per level.
    fn check_appell(&self) -> Result<()> {
        let nc = self.n_center as i64;
        for k in 1..self.rows as i64 {
            for x in [0.1, 1.0, 5.0] {
                let l = |m: i64| laguerre_eval(LaguerreParams::new(m as usize, nc - m), x);
                let lhs = -((k + 1) as f64) * l(k + 1);
                let t1 = (x + (k - nc) as f64) * l(k);
                let t2 = x * l(k - 1);
                let scale = t1.abs() + t2.abs();
                if !scale.is_finite() || !lhs.is_finite() || !(1e-250..=1e250).contains(&scale) {
                    continue;
                }
                if (lhs - t1 - t2).abs() > 1e-8 * scale {
                    return Err(Error::Degenerate(format!("Appell consistency fails at level {k}, x = {x}")));
                }
            }
        }
        Ok(())
    }

    pub fn n_center(&self) -> usize {
        self.n_center
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// All `k` roots of level `k` (1-based), decreasing, zeros last.
    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k - 1]
    }

    /// The `N∧k` positive roots of level `k`.
    pub fn nonzero(&self, k: usize) -> &[f64] {
        &self.levels[k - 1][..self.nonzero_count(k)]
    }

    pub fn nonzero_count(&self, k: usize) -> usize {
        k.min(self.n_center)
    }

    /// Multiplicity of the root 0 at level `k`.
    pub fn zero_multiplicity(&self, k: usize) -> usize {
        k.saturating_sub(self.n_center)
    }

    /// `l_{i,k}`, 1-based.
    pub fn root(&self, i: usize, k: usize) -> f64 {
        self.levels[k - 1][i - 1]
    }

    pub fn to_table(&self) -> crate::export::Table {
        let mut t = crate::export::Table::new(["k", "i", "l"])
            .meta("quantity", "crystal roots l_{i,k} of L_k^{(N-k)}")
            .meta("N", self.n_center.to_string())
            .meta("n", self.rows.to_string());
        for k in 1..=self.rows {
            for (i, &l) in self.level(k).iter().enumerate() {
                t.push(vec![k.into(), (i + 1).into(), l.into()]);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(CrystalTable::new(1, 1).unwrap().root(1, 1), 1.0);
        assert_eq!(CrystalTable::new(3, 1).unwrap().root(1, 1), 3.0);
        let c = CrystalTable::new(2, 4).unwrap();
        let l4 = c.level(4);
        // Nonzero part is L_2^{(2)} = (x² − 8x + 12)/2.
        assert!((l4[0] - 6.0).abs() < 1e-13 && (l4[1] - 2.0).abs() < 1e-13);
        assert_eq!(&l4[2..], &[0.0, 0.0]);
        assert_eq!(c.zero_multiplicity(4), 2);
        assert_eq!(c.nonzero(4).len(), 2);
    }

    #[test]
    fn interlacing_of_nonzero_roots() {
        let c = CrystalTable::new(7, 15).unwrap();
        for k in 1..15 {
            let (lo, hi) = (c.nonzero(k), c.nonzero(k + 1));
            for (i, &x) in lo.iter().enumerate() {
                assert!(hi[i] > x);
                if i + 1 < hi.len() {
                    assert!(x > hi[i + 1]);
                }
            }
        }
    }

    #[test]
    fn large_table_builds() {
        let c = CrystalTable::new(200, 600).unwrap();
        assert_eq!(c.level(600).len(), 600);
        assert!(c.nonzero(600).iter().all(|&x| x > 0.0));
    }

    #[test]
    fn rejects_empty() {
        assert!(CrystalTable::new(0, 3).is_err());
    }
}
