//! Modular arithmetic over a prime dimension and the generalized Pauli
//! (Weyl–Heisenberg) operators `U_{m,n} = X^m Z^n`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cone, czero, Real};

/// A prime local dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeDimension(usize);

impl PrimeDimension {
    pub fn new(d: usize) -> Result<Self> {
        if is_prime(d) {
            Ok(Self(d))
        } else {
            Err(Error::NotPrime(d))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Reduces any integer to its residue in `[0, d)`.
    pub fn residue(self, k: i64) -> usize {
        k.rem_euclid(self.0 as i64) as usize
    }

    /// `ω = e^{2πi/d}`.
    pub fn omega<T: Real>(self) -> Complex<T> {
        self.omega_pow(1)
    }

    /// `ω^k`, with `k` reduced mod `d` before exponentiating.
    pub fn omega_pow<T: Real>(self, k: i64) -> Complex<T> {
        let r = self.residue(k);
        if r == 0 {
            return cone();
        }
        if 2 * r == self.0 {
            return Complex::new(-T::one(), T::zero());
        }
        let angle = T::TAU() * T::from_count(r) / T::from_count(self.0);
        Complex::new(angle.cos(), angle.sin())
    }

    /// Label with both components reduced mod `d`.
    pub fn label(self, m: i64, n: i64) -> PauliLabel {
        PauliLabel { m: self.residue(m), n: self.residue(n) }
    }

    pub fn check(self, label: PauliLabel) -> Result<PauliLabel> {
        if label.m < self.0 && label.n < self.0 {
            Ok(label)
        } else {
            Err(Error::LabelOutOfRange { m: label.m, n: label.n, d: self.0 })
        }
    }

    /// All `d²` labels, ordered by `(m, n)`.
    pub fn labels(self) -> impl Iterator<Item = PauliLabel> {
        let d = self.0;
        (0..d * d).map(move |i| PauliLabel { m: i / d, n: i % d })
    }

    /// Index of a label in [`PrimeDimension::labels`] order.
    pub fn label_index(self, label: PauliLabel) -> usize {
        label.m * self.0 + label.n
    }

    pub fn label_at(self, index: usize) -> PauliLabel {
        PauliLabel { m: index / self.0, n: index % self.0 }
    }
}

impl fmt::Display for PrimeDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial division.
pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The pair `(m, n)` naming `X^m Z^n`. Serialized as `[m, n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct PauliLabel {
    pub m: usize,
    pub n: usize,
}

impl PauliLabel {
    pub const fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }
}

impl From<[usize; 2]> for PauliLabel {
    fn from([m, n]: [usize; 2]) -> Self {
        Self { m, n }
    }
}

impl From<PauliLabel> for [usize; 2] {
    fn from(l: PauliLabel) -> Self {
        [l.m, l.n]
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// A matrix with exactly one nonzero entry per column: column `j` maps to
/// row `targets[j]` with coefficient `phases[j]`.
///
/// Paulis and their tensor products are monomial, which lets conjugation of
/// a density matrix run in `O(N²)` instead of two dense products.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix<T> {
    targets: Vec<usize>,
    phases: Vec<Complex<T>>,
}

impl<T: Real> MonomialMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self { targets: (0..n).collect(), phases: vec![cone(); n] }
    }

    /// `U_{m,n}`: `e_j ↦ ω^{jn} e_{j+m}`.
    pub fn pauli(dim: PrimeDimension, label: PauliLabel) -> Self {
        let d = dim.get();
        Self {
            targets: (0..d).map(|j| (j + label.m) % d).collect(),
            phases: (0..d).map(|j| dim.omega_pow((j * label.n) as i64)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let r = rhs.dim();
        let mut targets = Vec::with_capacity(self.dim() * r);
        let mut phases = Vec::with_capacity(self.dim() * r);
        for (&ti, &pi) in self.targets.iter().zip(&self.phases) {
            for (&tk, &pk) in rhs.targets.iter().zip(&rhs.phases) {
                targets.push(ti * r + tk);
                phases.push(pi * pk);
            }
        }
        Self { targets, phases }
    }

    pub fn to_dense(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, (&t, &p)) in self.targets.iter().zip(&self.phases).enumerate() {
            out[(t, j)] = p;
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![czero(); v.len()];
        for (j, (&t, &p)) in self.targets.iter().zip(&self.phases).enumerate() {
            out[t] = p * v[j];
        }
        out
    }

    /// `M ρ M†`, accumulated into `acc` scaled by `weight`.
    pub fn conjugate_into(&self, rho: &ComplexMatrix<T>, weight: T, acc: &mut ComplexMatrix<T>) {
        let n = self.dim();
        debug_assert_eq!(rho.rows(), n);
        for i in 0..n {
            let (ti, pi) = (self.targets[i], self.phases[i] * weight);
            for j in 0..n {
                let (tj, pj) = (self.targets[j], self.phases[j]);
                acc[(ti, tj)] = acc[(ti, tj)] + pi * rho[(i, j)] * pj.conj();
            }
        }
    }
}

/// Cyclic shift `X|j⟩ = |j+1 mod d⟩`.
pub fn build_x<T: Real>(dim: PrimeDimension) -> ComplexMatrix<T> {
    MonomialMatrix::pauli(dim, PauliLabel::new(1, 0)).to_dense()
}

/// Clock `Z|j⟩ = ω^j |j⟩`.
pub fn build_z<T: Real>(dim: PrimeDimension) -> ComplexMatrix<T> {
    MonomialMatrix::pauli(dim, PauliLabel::new(0, 1)).to_dense()
}

/// `U_{m,n} = X^m · Z^n` as a dense matrix.
pub fn build_pauli<T: Real>(dim: PrimeDimension, label: PauliLabel) -> ComplexMatrix<T> {
    MonomialMatrix::pauli(dim, label).to_dense()
}

/// Phase `φ = ω^{nk − ml}` with `U_{m,n} U_{k,l} = φ U_{k,l} U_{m,n}`.
pub fn commutation_phase<T: Real>(dim: PrimeDimension, a: PauliLabel, b: PauliLabel) -> Complex<T> {
    let (m, n, k, l) = (a.m as i64, a.n as i64, b.m as i64, b.n as i64);
    dim.omega_pow(n * k - m * l)
}

/// Returns `φ` with `|φ| = 1` and `A = φB` within `tol`, if such a phase exists.
pub fn equal_up_to_phase<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, tol: T) -> Option<Complex<T>> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return None;
    }
    let bb = b.hs_inner(b).re;
    if bb <= T::zero() {
        return None;
    }
    let phi = b.hs_inner(a) / bb;
    if (phi.norm() - T::one()).abs() > tol {
        return None;
    }
    if a.max_abs_diff(&b.scale(phi)) > tol {
        return None;
    }
    Some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;
    const TOL: f64 = 1e-10;

    fn dim(d: usize) -> PrimeDimension {
        PrimeDimension::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&d| is_prime(d)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(matches!(PrimeDimension::new(4), Err(Error::NotPrime(4))));
        assert!(PrimeDimension::new(1).is_err());
        assert!(PrimeDimension::new(0).is_err());
    }

    #[test]
    fn omega_is_a_primitive_root() {
        for d in [2, 3, 5, 7, 11, 13] {
            let w: Complex<f64> = dim(d).omega();
            assert!((w.norm() - 1.0).abs() < 1e-12);
            assert!((w.powu(d as u32) - c(1., 0.)).norm() < 1e-12);
            for k in 1..d {
                assert!((w.powu(k as u32) - c(1., 0.)).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn x_for_qubit_and_qutrit() {
        let x2: M = build_x(dim(2));
        assert_eq!(x2, M::from_rows(vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap());
        let x3: M = build_x(dim(3));
        for i in 0..3 {
            for j in 0..3 {
                let expected = if (i, j) == (1, 0) || (i, j) == (2, 1) || (i, j) == (0, 2) { 1.0 } else { 0.0 };
                assert_eq!(x3[(i, j)], c(expected, 0.));
            }
        }
    }

    #[test]
    fn z_for_qubit_and_qutrit() {
        let z2: M = build_z(dim(2));
        assert!(z2.approx_eq(&M::diagonal(&[c(1., 0.), c(-1., 0.)]), TOL));
        let w = dim(3).omega::<f64>();
        let z3: M = build_z(dim(3));
        assert!(z3.approx_eq(&M::diagonal(&[c(1., 0.), w, w * w]), TOL));
    }

    #[test]
    fn x_and_z_have_order_d() {
        for d in [2, 3, 5, 7, 11, 13] {
            let x: M = build_x(dim(d));
            let z: M = build_z(dim(d));
            assert!(x.pow(d).approx_eq(&M::identity(d), TOL));
            assert!(z.pow(d).approx_eq(&M::identity(d), TOL));
        }
    }

    #[test]
    fn pauli_examples() {
        let xz: M = build_pauli(dim(2), PauliLabel::new(1, 1));
        assert!(xz.approx_eq(&M::from_rows(vec![vec![c(0., 0.), c(-1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap(), TOL));
        for d in [2, 3, 5] {
            assert_eq!(build_pauli::<f64>(dim(d), PauliLabel::new(0, 0)), M::identity(d));
        }
        // (1,2) at d = 3 sends e_j to ω^{2j} e_{j+1}
        let w = dim(3).omega::<f64>();
        let u: M = build_pauli(dim(3), PauliLabel::new(1, 2));
        for j in 0..3 {
            assert!((u[((j + 1) % 3, j)] - w.powu(2 * j as u32)).norm() < TOL);
        }
    }

    #[test]
    fn pauli_matches_repeated_products() {
        for d in [2, 3, 5, 7] {
            let x: M = build_x(dim(d));
            let z: M = build_z(dim(d));
            for l in dim(d).labels() {
                let direct: M = build_pauli(dim(d), l);
                assert!(direct.approx_eq(&(&x.pow(l.m) * &z.pow(l.n)), TOL), "d={d} {l}");
            }
        }
    }

    #[test]
    fn commutation_examples() {
        let d3 = dim(3);
        let phi: Complex<f64> = commutation_phase(d3, PauliLabel::new(1, 0), PauliLabel::new(0, 1));
        let w2 = d3.omega_pow::<f64>(2);
        assert!((phi - w2).norm() < 1e-15);
        // direct products XZ and ZX
        let x: M = build_x(d3);
        let z: M = build_z(d3);
        assert!((&x * &z).approx_eq(&(&z * &x).scale(phi), TOL));

        let qubit: Complex<f64> = commutation_phase(dim(2), PauliLabel::new(1, 0), PauliLabel::new(0, 1));
        assert!((qubit - c(-1., 0.)).norm() < 1e-15);
        for l in dim(5).labels() {
            assert_eq!(commutation_phase::<f64>(dim(5), l, l), c(1., 0.));
        }
    }

    #[test]
    fn equal_up_to_phase_examples() {
        let b: M = build_pauli(dim(3), PauliLabel::new(1, 1));
        let i = c(0., 1.);
        let phi = equal_up_to_phase(&b.scale(i), &b, TOL).unwrap();
        assert!((phi - i).norm() < 1e-14);
        let one = equal_up_to_phase(&b, &b, TOL).unwrap();
        assert!((one - c(1., 0.)).norm() < 1e-14);
        let x: M = build_x(dim(2));
        let z: M = build_z(dim(2));
        assert!(equal_up_to_phase(&x, &z, TOL).is_none());
        assert!(equal_up_to_phase(&x, &M::zeros(2, 2), TOL).is_none());
        assert!(equal_up_to_phase(&b.scale_real(2.0), &b, TOL).is_none());
    }

    #[test]
    fn monomial_kron_matches_dense_kron() {
        let d = dim(3);
        let a = MonomialMatrix::<f64>::pauli(d, PauliLabel::new(1, 2));
        let b = MonomialMatrix::<f64>::pauli(d, PauliLabel::new(2, 1));
        assert!(a.kron(&b).to_dense().approx_eq(&a.to_dense().kron(&b.to_dense()), 1e-14));
    }
}
