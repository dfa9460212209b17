//! Hermitian eigenvalues: Householder reduction to real symmetric tridiagonal
//! form followed by implicit QL with Wilkinson-style shifts.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

const MAX_QL_ITERATIONS: usize = 64;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower triangle is read during reduction, so small anti-Hermitian
/// noise is ignored rather than amplified.
pub fn hermitian_eigenvalues<T: Real>(matrix: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch { context: "eigenvalues of non-square matrix", expected: matrix.rows(), found: matrix.cols() });
    }
    let n = matrix.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Hermitian part, so that the reduction sees an exactly Hermitian input.
    let half = T::lit(0.5);
    let mut a: Vec<Complex<T>> = vec![czero(); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (matrix[(i, j)] + matrix[(j, i)].conj()) * half;
        }
    }
    let (mut diag, mut off) = tridiagonalize(&mut a, n);
    ql_implicit(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(diag)
}

/// Returns the diagonal and the moduli of the sub-diagonal.
fn tridiagonalize<T: Real>(a: &mut [Complex<T>], n: usize) -> (Vec<T>, Vec<T>) {
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let r = n - k - 1;
        let mut v: Vec<Complex<T>> = (0..r).map(|i| a[(k + 1 + i) * n + k]).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if alpha == T::zero() {
            off[k] = T::zero();
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > T::zero() { x0 / x0.norm() } else { Complex::new(T::one(), T::zero()) };
        v[0] = x0 + phase * alpha;
        let vnorm2 = two * alpha * (alpha + x0.norm());
        let tau = two / vnorm2;

        // p = tau * S v on the trailing block
        let mut p = vec![czero::<T>(); r];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = (k + 1 + i) * n + k + 1;
            let mut acc = czero();
            for j in 0..r {
                acc = acc + a[row + j] * v[j];
            }
            *pi = acc * tau;
        }
        let vp = v.iter().zip(&p).fold(czero::<T>(), |acc, (&vi, &pi)| acc + vi.conj() * pi);
        let kfac = vp.re * tau * T::lit(0.5);
        let q: Vec<Complex<T>> = p.iter().zip(&v).map(|(&pi, &vi)| pi - vi * kfac).collect();
        for i in 0..r {
            let row = (k + 1 + i) * n + k + 1;
            for j in 0..r {
                a[row + j] = a[row + j] - v[i] * q[j].conj() - q[i] * v[j].conj();
            }
        }
        off[k] = alpha;
        // column k below the sub-diagonal is now zero; it is never read again
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}

fn signed<T: Real>(magnitude: T, sign_of: T) -> T {
    if sign_of >= T::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix; eigenvalues left in `d`.
fn ql_implicit<T: Real>(d: &mut [T], off: &mut [T]) -> Result<()> {
    let n = d.len();
    let mut e = vec![T::zero(); n];
    e[..off.len()].copy_from_slice(off);
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd || e[m].abs() <= T::min_positive_value() {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence("tridiagonal QL"));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + signed(r, g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
