use super::{Matrix, SymTridiagonal};
use crate::error::{Error, Result};
use crate::real::Real;

/// Householder reduction of a symmetric matrix to tridiagonal form (same spectrum).
pub fn tridiagonalize<T: Real>(a: &Matrix<T>) -> Result<SymTridiagonal<T>> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::ShapeMismatch(format!("{}x{} is not square", n, a.cols())));
    }
    let mut a = a.clone();
    let two = T::of(2.0);
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).fold(T::zero(), |s, i| s + a[(i, k)] * a[(i, k)]).sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vnorm);

        // A' = A − v wᵀ − w vᵀ with w = 2p − 2(vᵀp)v, p = A v on the trailing block.
        let m = n - k - 1;
        let p: Vec<T> = (0..m).map(|i| (0..m).fold(T::zero(), |s, j| s + a[(k + 1 + i, k + 1 + j)] * v[j])).collect();
        let vp = v.iter().zip(&p).fold(T::zero(), |s, (&x, &y)| s + x * y);
        let w: Vec<T> = p.iter().zip(&v).map(|(&pi, &vi)| two * pi - two * vp * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = T::zero();
            a[(k, i)] = T::zero();
        }
    }
    let diag = (0..n).map(|i| a[(i, i)]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    SymTridiagonal::new(diag, off)
}

/// Eigenvalues of a symmetric matrix in decreasing order.
pub fn symmetric_eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    tridiagonalize(a)?.eigenvalues()
}
