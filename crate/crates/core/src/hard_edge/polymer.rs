use super::walk::StepLadder;
use crate::error::{Error, Result};
use crate::rng::{parallel_draws, stream, StreamRng};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Depth rule of the adaptive sum: stop once the last layer is below this fraction of the
/// running total and at least `ADAPTIVE_MIN_DEPTH` layers are in.
const ADAPTIVE_REL: f64 = 1e-6;
const ADAPTIVE_MIN_DEPTH: usize = 40;
const ADAPTIVE_MAX_DEPTH: usize = 5000;

/// `Cov(ζ_{a,v1}, ζ_{b,v2})` truncated at depth/breadth, plus an extrapolated depth tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymerCovariance {
    /// Sum over the first `depth` layers `v = min(v1,v2), min−1, …`.
    pub truncated: f64,
    /// Estimate of the layers beyond `depth`.
    pub tail: f64,
    /// `truncated + tail`.
    pub value: f64,
    pub depth: usize,
    pub breadth: usize,
    pub layers: Vec<f64>,
}

/// Layer contributions `Σ_s P^{v1,v}(a→s) P^{v2,v}(b→s) j²_{s,v}/2` for `v = min(v1,v2)` downward.
struct LayerWalk {
    ladder: StepLadder,
    ra: Vec<f64>,
    rb: Vec<f64>,
    v: i32,
}

impl LayerWalk {
    fn new(a: usize, v1: i32, b: usize, v2: i32, breadth: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > breadth || b > breadth {
            return Err(Error::InvalidParameter(format!("start indices ({a}, {b}) outside 1..={breadth}")));
        }
        let mut ladder = StepLadder::new(v1.max(v2), breadth)?;
        let vm = v1.min(v2);
        let mut start = |i: usize, v: i32| -> Result<Vec<f64>> {
            let mut r = vec![0.0; breadth];
            r[i - 1] = 1.0;
            for u in (vm + 1..=v).rev() {
                r = ladder.propagate(&r, u)?;
            }
            Ok(r)
        };
        let ra = start(a, v1)?;
        let rb = start(b, v2)?;
        Ok(LayerWalk { ladder, ra, rb, v: vm })
    }

    fn next_layer(&mut self) -> Result<f64> {
        let z = self.ladder.zeros(self.v)?;
        let c = self.ra.iter().zip(&self.rb).zip(&z.zeros).map(|((x, y), j)| x * y * j * j).sum::<f64>() * 0.5;
        self.ra = self.ladder.propagate(&self.ra, self.v)?;
        self.rb = self.ladder.propagate(&self.rb, self.v)?;
        self.v -= 1;
        Ok(c)
    }
}

/// Tail of the layer series. Layer `L` sits at `p = L + (v1+v2)/2 − min(v1,v2)` and decays like
/// `p^{−3}`; the last three layers fix `c_p ≈ Σ_{k=2..4} A_k / ((p+1)⋯(p+k+1))`, whose sums
/// telescope: `Σ_{p'>P} 1/((p'+1)⋯(p'+k+1)) = 1/(k (P+2)⋯(P+k+1))`.
fn extrapolate_tail(layers: &[f64], offset: f64) -> f64 {
    const KS: [usize; 3] = [2, 3, 4];
    let n = layers.len();
    if n < 2 * KS.len() {
        return 0.0;
    }
    let rising = |p: f64, from: usize, to: usize| (from..=to).map(|i| p + i as f64).product::<f64>();
    let mut rows = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (r, l) in (n - 3..n).enumerate() {
        let p = l as f64 + offset;
        for (c, &k) in KS.iter().enumerate() {
            rows[r][c] = 1.0 / rising(p, 1, k + 1);
        }
        rhs[r] = layers[l];
    }
    let Some(coef) = solve3(rows, rhs) else {
        return 0.0;
    };
    let last = (n - 1) as f64 + offset;
    KS.iter().zip(coef).map(|(&k, a)| a / (k as f64 * rising(last, 2, k + 1))).sum()
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        m.swap(col, piv);
        b.swap(col, piv);
        if m[col][col] == 0.0 {
            return None;
        }
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..3 {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        x[r] = (b[r] - (r + 1..3).map(|c| m[r][c] * x[c]).sum::<f64>()) / m[r][r];
    }
    Some(x)
}

fn finish(layers: Vec<f64>, v1: i32, v2: i32, breadth: usize) -> PolymerCovariance {
    let offset = 0.5 * (v1 + v2) as f64 - v1.min(v2) as f64;
    let truncated: f64 = layers.iter().sum();
    let tail = extrapolate_tail(&layers, offset);
    PolymerCovariance { truncated, tail, value: truncated + tail, depth: layers.len(), breadth, layers }
}

/// `Σ_v Σ_{s≤B} P^{v1,v}(a→s) P^{v2,v}(b→s) j²_{s,v}/2` over `depth` layers.
pub fn polymer_covariance(
    a: usize,
    v1: i32,
    b: usize,
    v2: i32,
    depth: usize,
    breadth: usize,
) -> Result<PolymerCovariance> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be ≥ 1".into()));
    }
    let mut walk = LayerWalk::new(a, v1, b, v2, breadth)?;
    let layers = (0..depth).map(|_| walk.next_layer()).collect::<Result<Vec<_>>>()?;
    Ok(finish(layers, v1, v2, breadth))
}

/// As [`polymer_covariance`], descending until the last layer is below `1e−6` of the total and
/// at least 40 layers are summed.
pub fn polymer_covariance_adaptive(a: usize, v1: i32, b: usize, v2: i32, breadth: usize) -> Result<PolymerCovariance> {
    let mut walk = LayerWalk::new(a, v1, b, v2, breadth)?;
    let mut layers = Vec::new();
    let mut total = 0.0;
    loop {
        let c = walk.next_layer()?;
        total += c;
        layers.push(c);
        if layers.len() >= ADAPTIVE_MIN_DEPTH && c.abs() < ADAPTIVE_REL * total.abs() {
            return Ok(finish(layers, v1, v2, breadth));
        }
        if layers.len() >= ADAPTIVE_MAX_DEPTH {
            return Err(Error::NoConvergence { what: "polymer depth", iterations: ADAPTIVE_MAX_DEPTH });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolymerConfig {
    pub a: usize,
    pub v1: i32,
    pub depth: usize,
    pub breadth: usize,
    pub seed: u64,
}

/// Coupled draws of `ζ_{a_i,v_i}` for several start points on one shared field
/// `η_{s,v} ~ N(0, j²_{s,v}/2)`, `v` from the highest start down to `min v_i − depth + 1`.
#[derive(Debug, Clone)]
pub struct PolymerSampler {
    starts: Vec<(usize, i32)>,
    top: i32,
    breadth: usize,
    /// `sd[l][s] = j_{s,top−l}/√2`.
    sd: Vec<Vec<f64>>,
    /// `weights[i][l][s] = P^{v_i, top−l}(a_i → s)`; empty for `top−l > v_i`.
    weights: Vec<Vec<Vec<f64>>>,
}

impl PolymerSampler {
    pub fn new(starts: &[(usize, i32)], depth: usize, breadth: usize) -> Result<Self> {
        if starts.is_empty() || depth == 0 {
            return Err(Error::InvalidParameter("need at least one start point and depth ≥ 1".into()));
        }
        if let Some(&(a, _)) = starts.iter().find(|(a, _)| *a == 0 || *a > breadth) {
            return Err(Error::InvalidParameter(format!("start index {a} outside 1..={breadth}")));
        }
        let top = starts.iter().map(|s| s.1).max().expect("nonempty");
        let bottom = starts.iter().map(|s| s.1).min().expect("nonempty") - depth as i32 + 1;
        let layers = (top - bottom + 1) as usize;
        let mut ladder = StepLadder::new(top, breadth)?;
        let sd = (0..layers)
            .map(|l| {
                Ok(ladder.zeros(top - l as i32)?.zeros.iter().map(|j| j * std::f64::consts::FRAC_1_SQRT_2).collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let mut weights = Vec::with_capacity(starts.len());
        for &(a, v) in starts {
            let mut w = vec![Vec::new(); layers];
            let mut row = vec![0.0; breadth];
            row[a - 1] = 1.0;
            for l in (top - v) as usize..layers {
                let order = top - l as i32;
                if l + 1 < layers {
                    let next = ladder.propagate(&row, order)?;
                    w[l] = std::mem::replace(&mut row, next);
                } else {
                    w[l] = std::mem::take(&mut row);
                }
            }
            weights.push(w);
        }
        Ok(PolymerSampler { starts: starts.to_vec(), top, breadth, sd, weights })
    }

    pub fn starts(&self) -> &[(usize, i32)] {
        &self.starts
    }

    pub fn breadth(&self) -> usize {
        self.breadth
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    /// One coupled draw: `ζ_i` for each start point, in order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.starts.len()];
        for (l, sd) in self.sd.iter().enumerate() {
            for (s, &sig) in sd.iter().enumerate() {
                let eta = sig * rng.sample::<f64, _>(StandardNormal);
                for (o, w) in out.iter_mut().zip(&self.weights) {
                    if let Some(&p) = w[l].get(s) {
                        *o += p * eta;
                    }
                }
            }
        }
        out
    }

    /// The partition functions with a given field `η[l][s]` (layer `l` = order `top − l`).
    pub fn evaluate(&self, eta: &[Vec<f64>]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.iter().zip(eta).map(|(wl, el)| wl.iter().zip(el).map(|(p, e)| p * e).sum::<f64>()).sum())
            .collect()
    }

    /// `count` coupled draws, chunk-parallel and reproducible from `seed`.
    pub fn sample_many(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        parallel_draws(seed, count, |rng: &mut StreamRng| self.sample(rng))
    }
}

/// One truncated draw of `ζ_{a,v1}` from stream 0 of the configured seed.
pub fn sample_polymer(config: PolymerConfig) -> Result<f64> {
    let sampler = PolymerSampler::new(&[(config.a, config.v1)], config.depth, config.breadth)?;
    Ok(sampler.sample(&mut stream(config.seed, 0))[0])
}
