use super::Matrix;
use crate::error::{Error, Result};
use crate::real::Real;

/// Symmetric tridiagonal matrix: `diag[i]` on the diagonal, `off[i]` coupling `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

const SWEEPS_PER_EIGENVALUE: usize = 60;

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if !diag.is_empty() && off.len() + 1 != diag.len() {
            return Err(Error::ShapeMismatch(format!(
                "tridiagonal with {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        let (vals, _) = self.solve(None)?;
        Ok(vals)
    }

    /// Eigenvalues (decreasing) with the first component of each normalized eigenvector,
    /// which is all Golub–Welsch quadrature needs.
    pub fn eigen_first_components(&self) -> Result<(Vec<T>, Vec<T>)> {
        let n = self.dim();
        let mut z = Matrix::zeros(1, n);
        if n > 0 {
            z[(0, 0)] = T::one();
        }
        let (vals, z) = self.solve(Some(z))?;
        Ok((vals, z.expect("tracked").row(0).to_vec()))
    }

    /// Unit eigenvector for an accurately known eigenvalue `lambda`, by twisted
    /// factorization: `LDLᵀ` from the top and `UDUᵀ` from the bottom of `T − λI` meet at
    /// the index where the twist pivot is smallest. O(n), no eigenvector matrix.
    pub fn eigenvector_for(&self, lambda: T) -> Vec<T> {
        let n = self.dim();
        if n == 0 {
            return Vec::new();
        }
        let scale = self.diag.iter().chain(&self.off).fold(lambda.abs(), |m, v| m.max(v.abs()));
        let tiny = T::epsilon() * T::epsilon() * scale.max(T::min_positive_value());
        let guard = |p: T| {
            if p.abs() < tiny {
                if p < T::zero() {
                    -tiny
                } else {
                    tiny
                }
            } else {
                p
            }
        };
        let a: Vec<T> = self.diag.iter().map(|&d| d - lambda).collect();
        let mut top = vec![T::zero(); n];
        top[0] = guard(a[0]);
        for i in 1..n {
            top[i] = guard(a[i] - self.off[i - 1] * self.off[i - 1] / top[i - 1]);
        }
        let mut bottom = vec![T::zero(); n];
        bottom[n - 1] = guard(a[n - 1]);
        for i in (0..n - 1).rev() {
            bottom[i] = guard(a[i] - self.off[i] * self.off[i] / bottom[i + 1]);
        }
        let twist = (0..n)
            .min_by(|&i, &j| {
                let g = |r: usize| (top[r] + bottom[r] - a[r]).abs();
                g(i).partial_cmp(&g(j)).expect("finite pivots")
            })
            .expect("nonempty");
        let mut z = vec![T::zero(); n];
        z[twist] = T::one();
        for i in (0..twist).rev() {
            z[i] = -self.off[i] / top[i] * z[i + 1];
        }
        for i in twist + 1..n {
            z[i] = -self.off[i - 1] / bottom[i] * z[i - 1];
        }
        let norm = z.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
        z.iter_mut().for_each(|v| *v /= norm);
        z
    }

    /// Eigenvalues (decreasing) and eigenvectors as the columns of the returned matrix.
    pub fn eigen(&self) -> Result<(Vec<T>, Matrix<T>)> {
        let (vals, z) = self.solve(Some(Matrix::identity(self.dim())))?;
        Ok((vals, z.expect("tracked")))
    }

    /// Implicit-shift QL; rotations are accumulated into the columns of `z` when given.
    fn solve(&self, mut z: Option<Matrix<T>>) -> Result<(Vec<T>, Option<Matrix<T>>)> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(T::zero());
        let two = T::of(2.0);
        let eps = T::epsilon();

        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= eps * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence { what: "tridiagonal QL", iterations: iter });
                }
                let mut g = (d[l + 1] - d[l]) / (two * e[l]);
                let mut r = g.hypot(T::one());
                g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
                let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
                let mut underflow = false;
                for i in (l..m).rev() {
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == T::zero() {
                        d[i + 1] -= p;
                        e[m] = T::zero();
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + two * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if let Some(z) = z.as_mut() {
                        for k in 0..z.rows() {
                            let f = z[(k, i + 1)];
                            z[(k, i + 1)] = s * z[(k, i)] + c * f;
                            z[(k, i)] = c * z[(k, i)] - s * f;
                        }
                    }
                }
                if underflow {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = T::zero();
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap_or(std::cmp::Ordering::Equal));
        let vals = order.iter().map(|&i| d[i]).collect();
        let z = z.map(|z| Matrix::from_fn(z.rows(), n, |r, c| z[(r, order[c])]));
        Ok((vals, z))
    }
}
