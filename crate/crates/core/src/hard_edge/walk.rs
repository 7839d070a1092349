use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quad::GaussKronrod;
use crate::specfun::{bessel_j, bessel_j_deriv, bessel_zero, bessel_zeros, BesselZeroTable};
use std::sync::Arc;

/// Transition probabilities `P^{v1,v2}(a → b)` for `a, b ≤ breadth` (0-based storage).
///
/// `tail_bound` bounds the row mass lost to targets beyond the breadth, summed over steps.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkKernel {
    pub from: i32,
    pub to: i32,
    pub breadth: usize,
    pub matrix: Matrix<f64>,
    pub tail_bound: f64,
}

impl WalkKernel {
    pub fn identity(order: i32, breadth: usize) -> Self {
        WalkKernel { from: order, to: order, breadth, matrix: Matrix::identity(breadth), tail_bound: 0.0 }
    }

    /// `P(a → b)`, 1-based.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.matrix[(a - 1, b - 1)]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.breadth).map(|i| self.matrix.row(i).iter().sum()).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &WalkKernel) -> Result<WalkKernel> {
        if next.from != self.to || next.breadth != self.breadth {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}→{} (B={}) with {}→{} (B={})",
                self.from, self.to, self.breadth, next.from, next.to, next.breadth
            )));
        }
        Ok(WalkKernel {
            from: self.from,
            to: next.to,
            breadth: self.breadth,
            matrix: self.matrix.matmul(&next.matrix)?,
            tail_bound: self.tail_bound + next.tail_bound,
        })
    }
}

/// One step `v → v−1`: `P(a→b) = 4j_a²/(j_a² − j_b²)²`; a zero source moves uniformly onto
/// the zero targets.
pub fn walk_step(zeros_v: &BesselZeroTable, zeros_vm1: &BesselZeroTable) -> Result<WalkKernel> {
    if zeros_vm1.order != zeros_v.order - 1 || zeros_v.len() != zeros_vm1.len() {
        return Err(Error::ShapeMismatch(format!(
            "step needs orders v, v−1 of equal breadth (got {} with {}, {} with {})",
            zeros_v.order,
            zeros_v.len(),
            zeros_vm1.order,
            zeros_vm1.len()
        )));
    }
    let breadth = zeros_v.len();
    let jb_last = zeros_vm1.get(breadth);
    let zero_targets = zeros_vm1.zero_count();
    let mut matrix = Matrix::zeros(breadth, breadth);
    let mut tail_bound = 0.0f64;
    for a in 0..breadth {
        let ja = zeros_v.zeros[a];
        if ja == 0.0 {
            for b in 0..zero_targets {
                matrix[(a, b)] = 1.0 / zero_targets as f64;
            }
            continue;
        }
        let ja2 = ja * ja;
        for (b, &jb) in zeros_vm1.zeros.iter().enumerate() {
            let d = ja2 - jb * jb;
            if d == 0.0 {
                return Err(Error::Degenerate(format!(
                    "j_{{{},{}}} coincides with j_{{{},{}}}",
                    a + 1,
                    zeros_v.order,
                    b + 1,
                    zeros_vm1.order
                )));
            }
            matrix[(a, b)] = 4.0 * ja2 / (d * d);
        }
        // Σ_{b>B} j_b^{-4} ≤ 1/(3π j_B³) with zero spacing ≈ π; 9 < 3π keeps it an upper estimate.
        let ratio = ja / jb_last;
        if ratio < 1.0 {
            tail_bound = tail_bound.max(4.0 * ja2 / (9.0 * jb_last.powi(3) * (1.0 - ratio * ratio).powi(2)));
        } else {
            tail_bound = f64::INFINITY;
        }
    }
    Ok(WalkKernel { from: zeros_v.order, to: zeros_vm1.order, breadth, matrix, tail_bound })
}

/// Lazily built one-step kernels `v → v−1` for `v ≤ top`, shared by composition and polymers.
#[derive(Debug, Clone)]
pub struct StepLadder {
    breadth: usize,
    top: i32,
    zeros: Vec<Arc<BesselZeroTable>>,
    steps: Vec<Arc<WalkKernel>>,
}

impl StepLadder {
    pub fn new(top: i32, breadth: usize) -> Result<Self> {
        if breadth == 0 {
            return Err(Error::InvalidParameter("breadth must be ≥ 1".into()));
        }
        Ok(StepLadder { breadth, top, zeros: vec![Arc::new(bessel_zeros(top, breadth)?)], steps: Vec::new() })
    }

    pub fn breadth(&self) -> usize {
        self.breadth
    }

    fn depth_of(&self, v: i32) -> Result<usize> {
        if v > self.top {
            return Err(Error::InvalidParameter(format!("order {v} above ladder top {}", self.top)));
        }
        Ok((self.top - v) as usize)
    }

    pub fn zeros(&mut self, v: i32) -> Result<Arc<BesselZeroTable>> {
        let d = self.depth_of(v)?;
        while self.zeros.len() <= d {
            let order = self.top - self.zeros.len() as i32;
            self.zeros.push(Arc::new(bessel_zeros(order, self.breadth)?));
        }
        Ok(self.zeros[d].clone())
    }

    /// Kernel `v → v−1`.
    pub fn step(&mut self, v: i32) -> Result<Arc<WalkKernel>> {
        let d = self.depth_of(v)?;
        while self.steps.len() <= d {
            let order = self.top - self.steps.len() as i32;
            let hi = self.zeros(order)?;
            let lo = self.zeros(order - 1)?;
            self.steps.push(Arc::new(walk_step(&hi, &lo)?));
        }
        Ok(self.steps[d].clone())
    }

    /// Row vector `row · P^{v,v−1}`.
    pub fn propagate(&mut self, row: &[f64], v: i32) -> Result<Vec<f64>> {
        self.step(v)?.matrix.apply_left(row)
    }
}

/// `P^{v1,v2}` as the product of one-step kernels truncated at breadth `B`.
pub fn walk_kernel(v1: i32, v2: i32, breadth: usize) -> Result<WalkKernel> {
    if v2 > v1 {
        return Err(Error::InvalidParameter(format!("walk runs downward: need v2 ≤ v1 (got {v1} → {v2})")));
    }
    let mut ladder = StepLadder::new(v1, breadth)?;
    if v1 == v2 {
        return Ok(WalkKernel::identity(v1, breadth));
    }
    let mut kernel = (*ladder.step(v1)?).clone();
    for v in (v2 + 1..v1).rev() {
        kernel = kernel.then(&*ladder.step(v)?)?;
    }
    Ok(kernel)
}

/// `P^{v1,v2}(a→b) = (j_{a,v1}/j_{b,v2}) ∫₀¹ J̃_{a,v1}(√(1−y)) J̃_{b,v2}(√(1−y)) (1−y)^{|v1−v2|/2} dy`,
/// integrated as `2∫₀¹ J̃_{a,v1}(z) J̃_{b,v2}(z) z^{|v1−v2|+1} dz`. A zero source reaches no
/// nonzero target, so it yields 0.
pub fn walk_kernel_integral(v1: i32, v2: i32, a: usize, b: usize) -> Result<f64> {
    let jb = bessel_zero(b, v2)?;
    if jb == 0.0 {
        return Err(Error::Precondition(format!("integral form needs j_{{{b},{v2}}} ≠ 0")));
    }
    let ja = bessel_zero(a, v1)?;
    if ja == 0.0 {
        return Ok(0.0);
    }
    let (da, db) = (bessel_j_deriv(v1, ja), bessel_j_deriv(v2, jb));
    let power = (v1 - v2).unsigned_abs() as i32 + 1;
    let f = |z: f64| 2.0 * bessel_j(v1, ja * z) / da * bessel_j(v2, jb * z) / db * z.powi(power);
    let est = GaussKronrod::new(1e-12, 1e-13).integrate(f, 0.0, 1.0)?;
    Ok(ja / jb * est.value)
}
