//! Dense complex matrices and the handful of factorizations the crate needs.
//!
//! Kets are plain `Vec<Complex<T>>` columns; density matrices, unitaries and
//! channel outputs are [`ComplexMatrix`]. Storage is row-major.

mod eigen;
mod svd;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, creal, Real};

pub use eigen::hermitian_eigenvalues;
pub use svd::singular_values;

/// Default entrywise comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; fails if the count is not `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { context: "matrix row length", expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `Σ_k |w_k⟩⟨w_k|` for a list of equal-length vectors.
    pub fn gram_of_columns(columns: &[Vec<Complex<T>>]) -> Self {
        let n = columns.first().map_or(0, Vec::len);
        let mut out = Self::zeros(n, n);
        for col in columns {
            debug_assert_eq!(col.len(), n);
            for i in 0..n {
                let ci = col[i];
                if ci == czero() {
                    continue;
                }
                let row = &mut out.data[i * n..(i + 1) * n];
                for (o, &cj) in row.iter_mut().zip(col) {
                    *o = *o + ci * cj.conj();
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(czero(), |a, b| a + b)
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { context: "matrix product", expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == czero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { context: "matrix-vector product", expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// Kronecker product `self ⊗ rhs`, row-major index `i·rhs.rows + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == czero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Integer power of a square matrix by repeated multiplication.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Hilbert–Schmidt inner product `tr(self† · rhs)`.
    pub fn hs_inner(&self, rhs: &Self) -> Complex<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "hs_inner shape mismatch");
        self.data.iter().zip(&rhs.data).fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - rhs`; infinite if the shapes differ.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return T::infinity();
        }
        self.data.iter().zip(&rhs.data).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, rhs: &Self, tol: T) -> bool {
        self.max_abs_diff(rhs) <= tol
    }

    /// `M†M = I` within `tol`, entrywise max-abs.
    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square() && (&self.adjoint() * self).approx_eq(&Self::identity(self.rows), tol)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn check_density(&self, tol: T) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotDensity(format!("matrix is {}x{}", self.rows, self.cols)));
        }
        if !self.is_hermitian(tol) {
            return Err(Error::NotDensity("matrix is not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr - cone()).norm() > tol {
            return Err(Error::NotDensity(format!("trace is {:.3e}{:+.3e}i", tr.re.as_f64(), tr.im.as_f64())));
        }
        let min = self.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::NotDensity(format!("minimum eigenvalue {:.3e}", min.as_f64())));
        }
        Ok(())
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<T>> {
        hermitian_eigenvalues(self)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.eigenvalues_hermitian()?.first().copied().unwrap_or(T::nan()))
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(self)
    }

    /// Stacks the entries row-major into one vector.
    pub fn vectorize(&self) -> Vec<Complex<T>> {
        self.data.clone()
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    /// Panics on inner-dimension mismatch; use [`ComplexMatrix::try_matmul`] for a checked product.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Row-major nested arrays of `[re, im]` pairs.
impl<T: Serialize> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        seq.end()
    }
}

/// Euclidean norm of a vector.
pub fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `⟨u|v⟩`.
pub fn vec_inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn vec_max_abs_diff<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> T {
    if u.len() != v.len() {
        return T::infinity();
    }
    u.iter().zip(v).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max)
}

/// Kronecker product of two vectors.
pub fn vec_kron<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect()
}

pub(crate) fn real_diag<T: Real>(values: &[T]) -> ComplexMatrix<T> {
    let diag: Vec<_> = values.iter().map(|&x| creal(x)).collect();
    ComplexMatrix::diagonal(&diag)
}
