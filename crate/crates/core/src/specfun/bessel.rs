//! `J_v(x)` for integer order. The ascending series is used only where it does not cancel
//! (`x²/4 ≤ |v|+1`); elsewhere Miller's backward recurrence normalized by
//! `J_0 + 2 Σ J_{2k} = 1`, which is accurate for every `x` reached by the zero tables.

/// `J_v(x)` for integer `v` and `x ≥ 0`; `J_{−v} = (−1)^v J_v`.
pub fn bessel_j(v: i32, x: f64) -> f64 {
    let n = v.unsigned_abs();
    let j = bessel_nonneg(n, x.abs());
    if v < 0 && n % 2 == 1 {
        -j
    } else {
        j
    }
}

/// `J_v'(x) = (J_{v−1}(x) − J_{v+1}(x))/2`.
pub fn bessel_j_deriv(v: i32, x: f64) -> f64 {
    0.5 * (bessel_j(v - 1, x) - bessel_j(v + 1, x))
}

fn bessel_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if 0.25 * x * x <= (n + 1) as f64 {
        series(n, x)
    } else {
        miller(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= h / i as f64;
    }
    let h2 = h * h;
    // Kahan summation.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 0..200u32 {
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= -h2 / ((k + 1) as f64 * (k + 1 + n) as f64);
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let top = (n as f64).max(x);
    let mut m = (top + 20.0 + 15.0 * x.cbrt()).ceil() as u32;
    m += m % 2;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut out = 0.0;
    for k in (1..=m).rev() {
        // j holds J_k (unnormalized); step to J_{k−1}.
        if k == n {
            out = j;
        }
        if k % 2 == 0 {
            norm += 2.0 * j;
        }
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > BIG {
            j /= BIG;
            jp1 /= BIG;
            norm /= BIG;
            out /= BIG;
        }
    }
    if n == 0 {
        out = j;
    }
    norm += j;
    out / norm
}
