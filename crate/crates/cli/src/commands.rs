use crate::config::{parse_pairs, Params};
use anyhow::{bail, Result};
use laguerre_corners::ensembles::tridiagonal_level;
use laguerre_corners::export::Table;
use laguerre_corners::hard_edge::{
    asymptotic_q, covariance_table, hard_edge_root_approx, limit_covariance, polymer_covariance, CovarianceEntry,
    CovarianceMethod, PolymerSampler,
};
use laguerre_corners::rng::{parallel_draws, StreamRng};
use laguerre_corners::specfun::{bessel_zero, bessel_zeros, laguerre_roots, LaguerreParams};
use laguerre_corners::stats::{sample_covariance, variance_se};
use laguerre_corners::zero_temp::{
    covariance, covariance_matrix, dual_poly_column, oracle_covariance, sample_infinity_corners, top_level_covariance,
    CrystalTable,
};

/// A finished artifact plus the one-line summary printed on stdout.
pub struct Outcome {
    pub table: Table,
    pub truncation: String,
    pub summary: String,
}

/// Exactly one of the mode switches must be on.
fn one_mode<'a>(command: &str, modes: &[(&'a str, bool)]) -> Result<&'a str> {
    let on: Vec<&str> = modes.iter().filter(|m| m.1).map(|m| m.0).collect();
    match on.as_slice() {
        [one] => Ok(one),
        _ => {
            let names: Vec<String> = modes.iter().map(|m| format!("--{}", m.0)).collect();
            bail!("`{command}` needs exactly one of {}", names.join(", "))
        }
    }
}

pub fn roots(p: &Params) -> Result<Outcome> {
    if p.bessel {
        let order = p.order.unwrap_or(0);
        let count = p.count.unwrap_or(10);
        if count == 0 {
            bail!("--count must be at least 1");
        }
        let zeros = bessel_zeros(order, count)?;
        let mut table = Table::new(["b", "j"]).meta("quantity", format!("zeros j_{{b,{order}}} of J_{order}"));
        for (b, &j) in zeros.zeros.iter().enumerate() {
            table.push(vec![(b + 1).into(), j.into()]);
        }
        let summary = format!("{count} zeros of J_{order}; j_1 = {:.6}", zeros.get(1));
        return Ok(Outcome { table, truncation: "none".into(), summary });
    }
    let (nc, rows) = p.crystal_shape()?;
    let crystal = CrystalTable::new(nc, rows)?;
    let table = crystal.to_table();
    let summary = format!("crystal roots for N={nc}, n={rows}: {} entries", table.rows.len());
    Ok(Outcome { table, truncation: "none".into(), summary })
}

pub fn cov(p: &Params) -> Result<Outcome> {
    match one_mode("cov", &[("finite", p.finite), ("limit", p.limit), ("oracle", p.oracle)])? {
        "finite" => cov_finite(p),
        "limit" => cov_limit(p),
        _ => cov_oracle(p),
    }
}

fn cov_finite(p: &Params) -> Result<Outcome> {
    let (nc, rows) = p.crystal_shape()?;
    let crystal = CrystalTable::new(nc, rows)?;
    let Some(text) = &p.pairs else {
        let full = covariance_matrix(&crystal)?;
        let summary = format!("full {}×{} covariance for N={nc}, n={rows}", full.index.len(), full.index.len());
        return Ok(Outcome { table: full.to_table("spectral"), truncation: "none".into(), summary });
    };
    let idx = parse_pairs(text)?;
    if idx.len() % 2 != 0 {
        bail!("--pairs needs an even number of (a,k) entries; consecutive entries form one pair");
    }
    let mut table = Table::new(["a", "k", "b", "l", "value", "method"])
        .meta("quantity", "Cov(xi_{a,k}, xi_{b,l}) in the zero-temperature limit")
        .meta("N", nc.to_string())
        .meta("n", rows.to_string());
    for pair in idx.chunks(2) {
        let ((a, k), (b, l)) = (pair[0], pair[1]);
        let value = covariance(a, k, b, l, &crystal)?;
        table.push(vec![a.into(), k.into(), b.into(), l.into(), value.into(), "spectral".into()]);
    }
    let summary = format!("{} covariance entries for N={nc}, n={rows}", table.rows.len());
    Ok(Outcome { table, truncation: "none".into(), summary })
}

fn cov_limit(p: &Params) -> Result<Outcome> {
    let (a, s, b, t) = (p.a.unwrap_or(1), p.s.unwrap_or(0), p.b.unwrap_or(1), p.t.unwrap_or(0));
    let value = limit_covariance(a, s, b, t)?;
    let mut entries = vec![CovarianceEntry {
        a,
        s,
        b,
        t,
        value,
        method: CovarianceMethod::Quadrature,
        truncation: "gauss-kronrod rel 1e-11".into(),
    }];
    let mut truncation = "quadrature rel 1e-11".to_string();
    let mut summary = format!("limit covariance ({a},{s})×({b},{t}) = {value:.10}");
    if p.polymer {
        let (depth, breadth) = (p.depth()?, p.breadth()?);
        let poly = polymer_covariance(a, s, b, t, depth, breadth)?;
        let trunc = format!("V={depth};B={breadth};tail={:.3e}", poly.tail);
        entries.push(CovarianceEntry {
            a,
            s,
            b,
            t,
            value: poly.value,
            method: CovarianceMethod::Polymer,
            truncation: trunc.clone(),
        });
        summary.push_str(&format!("; polymer {:.10} (|Δ| = {:.2e})", poly.value, (poly.value - value).abs()));
        truncation.push_str(&format!("; polymer {trunc}"));
    }
    Ok(Outcome { table: covariance_table(&entries), truncation, summary })
}

fn cov_oracle(p: &Params) -> Result<Outcome> {
    let (nc, rows) = p.crystal_shape()?;
    let crystal = CrystalTable::new(nc, rows)?;
    let spectral = covariance_matrix(&crystal)?;
    let oracle = oracle_covariance(&crystal)?;
    let diff = spectral.matrix.max_abs_diff(&oracle.matrix);
    let table = oracle.to_table("precision-inverse").meta("max_abs_spectral_minus_oracle", format!("{diff:e}"));
    let summary = format!("N={nc}, n={rows}: max |spectral − oracle| = {diff:.3e}");
    Ok(Outcome { table, truncation: "none".into(), summary })
}

pub fn mc(p: &Params) -> Result<Outcome> {
    match one_mode("mc", &[("polymer", p.polymer), ("tridiag", p.tridiag), ("infinity", p.infinity)])? {
        "polymer" => mc_polymer(p),
        "tridiag" => mc_tridiag(p),
        _ => mc_infinity(p),
    }
}

fn z_score(empirical: f64, se: f64, target: f64) -> f64 {
    (empirical - target) / se
}

fn mc_polymer(p: &Params) -> Result<Outcome> {
    let (a, v) = (p.a.unwrap_or(1), p.v.unwrap_or(0));
    let (depth, breadth, samples, seed) = (p.depth()?, p.breadth()?, p.samples()?, p.seed.unwrap_or(0));
    let target = limit_covariance(a, v, a, v)?;
    let truncated = polymer_covariance(a, v, a, v, depth, breadth)?;
    let sampler = PolymerSampler::new(&[(a, v)], depth, breadth)?;
    let draws: Vec<f64> = sampler.sample_many(seed, samples).into_iter().map(|d| d[0]).collect();
    let (var, se) = variance_se(&draws);
    let mut table = Table::new(["a", "v", "empirical_var", "stderr", "target", "method", "z"])
        .meta("quantity", format!("Var(zeta_{{{a},{v}}}) from the polymer sampler"))
        .meta("samples", samples.to_string())
        .meta("seed", seed.to_string());
    table.push(vec![
        a.into(),
        v.into(),
        var.into(),
        se.into(),
        target.into(),
        "quadrature".into(),
        z_score(var, se, target).into(),
    ]);
    table.push(vec![
        a.into(),
        v.into(),
        var.into(),
        se.into(),
        truncated.truncated.into(),
        "polymer-truncated".into(),
        z_score(var, se, truncated.truncated).into(),
    ]);
    let summary =
        format!("Var(ζ_{{{a},{v}}}) = {var:.5} ± {se:.5}; quadrature {target:.6}; z = {:.2}", z_score(var, se, target));
    Ok(Outcome { table, truncation: format!("V={depth};B={breadth}"), summary })
}

fn mc_tridiag(p: &Params) -> Result<Outcome> {
    let nc = p.n_center()?;
    let k = match p.k {
        Some(0) | None => bail!("--tridiag needs --k ≥ 1"),
        Some(k) => k,
    };
    let beta = p.beta.unwrap_or(2.0);
    if !(beta > 0.0 && beta.is_finite()) {
        bail!("--beta must be positive and finite");
    }
    let (samples, seed) = (p.samples()?, p.seed.unwrap_or(0));
    let crystal = CrystalTable::new(nc, k)?;
    let exact = top_level_covariance(&crystal)?;
    let centre = crystal.nonzero(k).to_vec();
    let scale = beta.sqrt();
    let draws: Vec<Vec<f64>> = parallel_draws(seed, samples, |rng: &mut StreamRng| {
        tridiagonal_level(k, nc, beta, rng).map(|lev| lev.iter().zip(&centre).map(|(x, l)| scale * (x - l)).collect())
    })
    .into_iter()
    .collect::<laguerre_corners::Result<_>>()?;
    let mut table = Table::new(["i", "empirical_var", "stderr", "target", "z"])
        .meta("quantity", format!("Var(sqrt(beta)(lambda_i - l_{{i,{k}}})) at level k={k}, N={nc}, beta={beta}"))
        .meta("samples", samples.to_string())
        .meta("seed", seed.to_string());
    let mut worst = 0.0f64;
    for i in 0..centre.len() {
        let col: Vec<f64> = draws.iter().map(|d| d[i]).collect();
        let (var, se) = variance_se(&col);
        let rel = (var / exact[(i, i)] - 1.0).abs();
        worst = worst.max(rel);
        table.push(vec![
            (i + 1).into(),
            var.into(),
            se.into(),
            exact[(i, i)].into(),
            z_score(var, se, exact[(i, i)]).into(),
        ]);
    }
    let summary = format!("level {k}, N={nc}, β={beta}: max relative variance deviation {worst:.3}");
    Ok(Outcome { table, truncation: "none".into(), summary })
}

fn mc_infinity(p: &Params) -> Result<Outcome> {
    let (nc, rows) = p.crystal_shape()?;
    let (samples, seed) = (p.samples()?, p.seed.unwrap_or(0));
    let crystal = CrystalTable::new(nc, rows)?;
    let exact = covariance_matrix(&crystal)?;
    let index = exact.index.clone();
    let draws: Vec<Vec<f64>> = parallel_draws(seed, samples, |rng: &mut StreamRng| {
        sample_infinity_corners(&crystal, rng).map(|f| index.iter().map(|&(a, k)| f.get(a, k)).collect())
    })
    .into_iter()
    .collect::<laguerre_corners::Result<_>>()?;
    let est = sample_covariance(&draws);
    let mut table = Table::new(["a", "k", "b", "l", "empirical", "stderr", "exact", "z"])
        .meta("quantity", "covariance of the infinity-corners sampler vs the spectral formula")
        .meta("N", nc.to_string())
        .meta("n", rows.to_string())
        .meta("samples", samples.to_string())
        .meta("seed", seed.to_string());
    let (mut worst_abs, mut worst_z) = (0.0f64, 0.0f64);
    for i in 0..index.len() {
        for j in 0..=i {
            let (e, se, x) = (est.cov[(i, j)], est.stderr[(i, j)], exact.matrix[(i, j)]);
            let z = z_score(e, se, x);
            worst_abs = worst_abs.max((e - x).abs());
            worst_z = worst_z.max(z.abs());
            let ((a, k), (b, l)) = (index[i], index[j]);
            table.push(vec![a.into(), k.into(), b.into(), l.into(), e.into(), se.into(), x.into(), z.into()]);
        }
    }
    let summary = format!("N={nc}, n={rows}: max |empirical − exact| = {worst_abs:.3e}, max |z| = {worst_z:.2}");
    Ok(Outcome { table, truncation: "none".into(), summary })
}

pub fn converge(p: &Params) -> Result<Outcome> {
    match one_mode("converge", &[("theorem1", p.theorem1), ("roots", p.roots), ("qasymp", p.qasymp)])? {
        "theorem1" => converge_limit_covariance(p),
        "roots" => converge_roots(p),
        _ => converge_qasymp(p),
    }
}

fn sci_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn decreasing(errs: &[f64]) -> bool {
    errs.windows(2).all(|w| w[1] < w[0])
}

/// `N² cov(ξ_{N+1−s−a, N−s}, ξ_{N+1−t−b, N−t})` with `n = 3N` against the limit.
fn converge_limit_covariance(p: &Params) -> Result<Outcome> {
    let (a, s, b, t) = (p.a.unwrap_or(1), p.s.unwrap_or(0), p.b.unwrap_or(1), p.t.unwrap_or(0));
    let limit = limit_covariance(a, s, b, t)?;
    let mut table = Table::new(["N", "finite", "limit", "abs_err", "rel_err"]).meta(
        "quantity",
        format!("N^2 Cov(xi_{{N+1-s-a,N-s}}, xi_{{N+1-t-b,N-t}}), (a,s,b,t)=({a},{s},{b},{t}), n=3N"),
    );
    let mut errs = Vec::new();
    for nc in p.ns()? {
        let level = |order: i32, idx: usize| -> Result<(usize, usize)> {
            let k = nc as i64 - order as i64;
            let i = k + 1 - idx as i64;
            if k < 1 || i < 1 {
                bail!("N={nc} too small for index ({idx}, {order})");
            }
            Ok((i as usize, k as usize))
        };
        let ((i1, k1), (i2, k2)) = (level(s, a)?, level(t, b)?);
        let crystal = CrystalTable::new(nc, 3 * nc)?;
        let finite = (nc * nc) as f64 * covariance(i1, k1, i2, k2, &crystal)?;
        let err = (finite - limit).abs();
        errs.push(err);
        table.push(vec![nc.into(), finite.into(), limit.into(), err.into(), (err / limit.abs()).into()]);
    }
    let mono = decreasing(&errs);
    let table = table.meta("error_decreasing", mono.to_string());
    let summary = format!("limit {limit:.8}; errors {}; decreasing: {mono}", sci_list(&errs));
    Ok(Outcome { table, truncation: "quadrature rel 1e-11".into(), summary })
}

fn converge_roots(p: &Params) -> Result<Outcome> {
    let (r, alpha) = (p.r.unwrap_or(1), p.alpha.unwrap_or(0));
    let mut table = Table::new(["N", "k", "crystal_root", "approx", "abs_err", "ratio_to_prev"])
        .meta("quantity", format!("l_{{k+1-r,k}} vs j_{{r,alpha}}^2/(4N), r={r}, alpha={alpha}"));
    let mut errs: Vec<f64> = Vec::new();
    for nc in p.ns()? {
        let k = nc as i64 - alpha as i64;
        if k < 1 || r as i64 > k {
            bail!("N={nc}: need 1 ≤ r ≤ k = N − alpha");
        }
        let k = k as usize;
        let approx = hard_edge_root_approx(r, k, nc)?;
        let roots: Vec<f64> = laguerre_roots(LaguerreParams::new(k, alpha as i64))?;
        let root = roots[k - r];
        let err = (root - approx).abs();
        let ratio = errs.last().map_or(f64::NAN, |prev| prev / err);
        errs.push(err);
        table.push(vec![nc.into(), k.into(), root.into(), approx.into(), err.into(), ratio.into()]);
    }
    let summary = format!("root errors {}", sci_list(&errs));
    Ok(Outcome { table, truncation: "none".into(), summary })
}

/// `sup_m |−(−1)^m Q̃_m^{(k)}(l_{k+1−r,k})/√N − asymptotic_q(r, α, m/(N∧k))|`, `k = N − α`.
fn q_profile_deviation(nc: usize, r: usize, alpha: i32) -> Result<f64> {
    let k = nc as i64 - alpha as i64;
    if k < 1 || r as i64 > k {
        bail!("N={nc}: need 1 ≤ r ≤ k = N − alpha");
    }
    let k = k as usize;
    let crystal = CrystalTable::new(nc, k)?;
    let q = dual_poly_column(k, k + 1 - r, &crystal)?;
    let count = q.len() as f64;
    let sqrt_n = (nc as f64).sqrt();
    let mut worst = 0.0f64;
    for (m, &v) in q.iter().enumerate() {
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        worst = worst.max((sign * v / sqrt_n - asymptotic_q(r, alpha, m as f64 / count)?).abs());
    }
    Ok(worst)
}

fn converge_qasymp(p: &Params) -> Result<Outcome> {
    let (r, alpha) = (p.r.unwrap_or(1), p.alpha.unwrap_or(0));
    if bessel_zero(r, alpha)? == 0.0 {
        bail!("j_{{{r},{alpha}}} = 0: the profile limit needs a nonzero Bessel zero");
    }
    let mut table = Table::new(["N", "sup_error", "ratio_to_prev"])
        .meta("quantity", format!("sup_m deviation of the normalized dual polynomial profile, r={r}, alpha={alpha}"))
        .meta("profile_variable", "m/(N min k)");
    let mut errs: Vec<f64> = Vec::new();
    for nc in p.ns()? {
        let err = q_profile_deviation(nc, r, alpha)?;
        let ratio = errs.last().map_or(f64::NAN, |prev| prev / err);
        errs.push(err);
        table.push(vec![nc.into(), err.into(), ratio.into()]);
    }
    let summary = format!("sup errors {}", sci_list(&errs));
    Ok(Outcome { table, truncation: "none".into(), summary })
}
