//! Singular values by one-sided (Hestenes) Jacobi rotations on the rows.

use num_complex::Complex;

use super::{vec_inner, ComplexMatrix};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values<T: Real>(matrix: &ComplexMatrix<T>) -> Vec<T> {
    let m = matrix.rows();
    let k = m.min(matrix.cols());
    let mut rows: Vec<Vec<Complex<T>>> = matrix.to_rows();
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..m {
            for j in i + 1..m {
                let alpha: T = rows[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = rows[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vec_inner(&rows[i], &rows[j]);
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate row j by the phase of gamma so the overlap is real
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = rows.split_at_mut(j);
                for (u, v) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                    let vh = *v * phase;
                    let nu = *u * c - vh * s;
                    *v = *u * s + vh * c;
                    *u = nu;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv.truncate(k);
    sv
}
