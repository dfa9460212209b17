//! Kets and density matrices on composite systems: the maximally entangled
//! basis, Werner states, and the subsystem bookkeeping (permutation, partial
//! trace, partial transpose) every multi-party identity is checked through.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{real_diag, vec_kron, vec_max_abs_diff, vec_norm, ComplexMatrix};
use crate::pauli::{PauliLabel, PrimeDimension};
use crate::scalar::{czero, creal, Real};

/// Local dimensions of a two-party system `d_A ⊗ d_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteShape {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteShape {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidInput(format!("local dimensions must be positive, got {d_a}x{d_b}")));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn square(d: usize) -> Self {
        Self { d_a: d, d_b: d }
    }

    pub fn total(self) -> usize {
        self.d_a * self.d_b
    }

    pub fn dims(self) -> [usize; 2] {
        [self.d_a, self.d_b]
    }
}

/// A pure state on an ordered list of subsystems; `|a⟩|b⟩ ↦ a·d_B + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket<T> {
    dims: Vec<usize>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> Ket<T> {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != amplitudes.len() {
            return Err(Error::DimensionMismatch { context: "ket amplitudes", expected: total, found: amplitudes.len() });
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Self {
        let total: usize = dims.iter().product();
        let mut amplitudes = vec![czero(); total];
        amplitudes[index] = creal(T::one());
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn shape(&self) -> Option<BipartiteShape> {
        match self.dims[..] {
            [d_a, d_b] => Some(BipartiteShape { d_a, d_b }),
            _ => None,
        }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex<T> {
        self.amplitudes[Subsystems::new(&self.dims).index(digits)]
    }

    pub fn norm(&self) -> T {
        vec_norm(&self.amplitudes)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= T::zero() {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(Self { dims: self.dims.clone(), amplitudes: self.amplitudes.iter().map(|&z| z / n).collect() })
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        crate::linalg::vec_inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dims != other.dims {
            return T::infinity();
        }
        vec_max_abs_diff(&self.amplitudes, &other.amplitudes)
    }

    /// Reorders subsystems; `perm[k]` is the old position of the new `k`-th factor.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (dims, amplitudes) = permute_vector(&self.amplitudes, &self.dims, perm)?;
        Ok(Self { dims, amplitudes })
    }
}

/// Kronecker product for kets and matrices alike.
pub trait Tensor {
    fn tensor(&self, rhs: &Self) -> Self;
}

impl<T: Real> Tensor for ComplexMatrix<T> {
    fn tensor(&self, rhs: &Self) -> Self {
        self.kron(rhs)
    }
}

impl<T: Real> Tensor for Ket<T> {
    fn tensor(&self, rhs: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&rhs.dims);
        Self { dims, amplitudes: vec_kron(&self.amplitudes, &rhs.amplitudes) }
    }
}

/// `|Φ⁺⟩ = (1/√d) Σ_j |jj⟩`.
pub fn phi_plus<T: Real>(dim: PrimeDimension) -> Ket<T> {
    phi_mn(dim, PauliLabel::new(0, 0))
}

/// `|Φ_{m,n}⟩ = (U_{m,n} ⊗ I)|Φ⁺⟩ = (1/√d) Σ_j ω^{jn} |j+m⟩|j⟩`.
pub fn phi_mn<T: Real>(dim: PrimeDimension, label: PauliLabel) -> Ket<T> {
    let d = dim.get();
    let norm = T::from_count(d).sqrt().recip();
    let mut amplitudes = vec![czero(); d * d];
    for j in 0..d {
        amplitudes[((j + label.m) % d) * d + j] = dim.omega_pow::<T>((j * label.n) as i64) * norm;
    }
    Ket { dims: vec![d, d], amplitudes }
}

/// `(op_a ⊗ op_b)|ket⟩` without forming the Kronecker product.
pub fn apply_local<T: Real>(ket: &Ket<T>, op_a: &ComplexMatrix<T>, op_b: &ComplexMatrix<T>) -> Result<Ket<T>> {
    let shape = ket.shape().ok_or(Error::DimensionMismatch { context: "apply_local expects a bipartite ket", expected: 2, found: ket.dims.len() })?;
    let (da, db) = (shape.d_a, shape.d_b);
    for (op, want, ctx) in [(op_a, da, "apply_local first factor"), (op_b, db, "apply_local second factor")] {
        if op.rows() != want || op.cols() != want {
            return Err(Error::DimensionMismatch { context: ctx, expected: want, found: op.rows().max(op.cols()) });
        }
    }
    // psi' = A Ψ Bᵀ with Ψ the d_A × d_B amplitude grid
    let psi = &ket.amplitudes;
    let mut tmp = vec![czero::<T>(); da * db];
    for a2 in 0..da {
        for a in 0..da {
            let coef = op_a[(a2, a)];
            if coef == czero() {
                continue;
            }
            for b in 0..db {
                tmp[a2 * db + b] = tmp[a2 * db + b] + coef * psi[a * db + b];
            }
        }
    }
    let mut out = vec![czero::<T>(); da * db];
    for a2 in 0..da {
        for b2 in 0..db {
            let mut acc = czero();
            for b in 0..db {
                acc = acc + op_b[(b2, b)] * tmp[a2 * db + b];
            }
            out[a2 * db + b2] = acc;
        }
    }
    Ok(Ket { dims: ket.dims.clone(), amplitudes: out })
}

/// Two-qubit Werner state `(4p−1)/3 |Φ⁺⟩⟨Φ⁺| + (1−p)/3 I`, with `p ∈ [0, 1]`.
///
/// Its spectrum is `{p, (1−p)/3, (1−p)/3, (1−p)/3}`.
pub fn werner_state<T: Real>(p: T) -> Result<ComplexMatrix<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidWerner(p.as_f64()));
    }
    let three = T::lit(3.0);
    let a = (T::lit(4.0) * p - T::one()) / three;
    let b = (T::one() - p) / three;
    let qubit = PrimeDimension::new(2)?;
    let rho = &phi_plus::<T>(qubit).density().scale_real(a) + &real_diag(&[b; 4]);
    if rho.min_eigenvalue()? < -T::lit(1e-10) {
        return Err(Error::InvalidWerner(p.as_f64()));
    }
    Ok(rho)
}

/// `Σ_j c_j |jj⟩`, normalized.
pub fn schmidt_ket<T: Real>(coefficients: &[Complex<T>]) -> Result<Ket<T>> {
    let d = coefficients.len();
    let mut amplitudes = vec![czero(); d * d];
    for (j, &c) in coefficients.iter().enumerate() {
        amplitudes[j * d + j] = c;
    }
    Ket { dims: vec![d, d], amplitudes }.normalized()
}

/// Row-major mixed-radix indexing over a list of subsystem dimensions.
#[derive(Clone, Debug)]
pub struct Subsystems {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Subsystems {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Self { dims: dims.to_vec(), strides }
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        self.dims.iter().zip(&self.strides).map(|(&d, &s)| (index / s) % d).collect()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(&g, &s)| g * s).sum()
    }
}

fn check_dims(total: usize, dims: &[usize], context: &'static str) -> Result<()> {
    let product: usize = dims.iter().product();
    if product != total || dims.is_empty() {
        return Err(Error::DimensionMismatch { context, expected: product, found: total });
    }
    Ok(())
}

/// Returns the new dims and `map[old_index] = new_index` for a subsystem permutation.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch { context: "subsystem permutation length", expected: dims.len(), found: perm.len() });
    }
    for &p in perm {
        if p >= dims.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of {} subsystems", dims.len())));
        }
    }
    let old = Subsystems::new(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new = Subsystems::new(&new_dims);
    let map = (0..old.total())
        .map(|i| {
            let digits = old.digits(i);
            let permuted: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
            new.index(&permuted)
        })
        .collect();
    Ok((new_dims, map))
}

pub fn permute_vector<T: Real>(v: &[Complex<T>], dims: &[usize], perm: &[usize]) -> Result<(Vec<usize>, Vec<Complex<T>>)> {
    check_dims(v.len(), dims, "permute_vector")?;
    let (new_dims, map) = permutation_map(dims, perm)?;
    let mut out = vec![czero(); v.len()];
    for (i, &z) in v.iter().enumerate() {
        out[map[i]] = z;
    }
    Ok((new_dims, out))
}

/// Reorders the subsystems of an operator; `perm[k]` is the old position of the new `k`-th factor.
pub fn permute_subsystems<T: Real>(rho: &ComplexMatrix<T>, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix<T>> {
    check_dims(rho.rows(), dims, "permute_subsystems")?;
    let (_, map) = permutation_map(dims, perm)?;
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = rho[(i, j)];
        }
    }
    Ok(out)
}

/// Traces out every subsystem whose `keep` flag is false.
pub fn partial_trace<T: Real>(rho: &ComplexMatrix<T>, dims: &[usize], keep: &[bool]) -> Result<ComplexMatrix<T>> {
    check_dims(rho.rows(), dims, "partial_trace")?;
    if keep.len() != dims.len() || !rho.is_square() {
        return Err(Error::DimensionMismatch { context: "partial_trace keep mask", expected: dims.len(), found: keep.len() });
    }
    let kept_dims: Vec<usize> = dims.iter().zip(keep).filter(|(_, &k)| k).map(|(&d, _)| d).collect();
    let traced_dims: Vec<usize> = dims.iter().zip(keep).filter(|(_, &k)| !k).map(|(&d, _)| d).collect();
    let full = Subsystems::new(dims);
    let kept = Subsystems::new(&kept_dims);
    let traced = Subsystems::new(&traced_dims);
    let (nk, nt) = (kept.total(), traced.total());
    // full_index[ki * nt + t]
    let mut full_index = Vec::with_capacity(nk * nt);
    for ki in 0..nk {
        let kd = kept.digits(ki);
        for t in 0..nt {
            let td = traced.digits(t);
            let (mut a, mut b) = (kd.iter(), td.iter());
            let digits: Vec<usize> = keep.iter().map(|&k| if k { *a.next().unwrap() } else { *b.next().unwrap() }).collect();
            full_index.push(full.index(&digits));
        }
    }
    Ok(ComplexMatrix::from_fn(nk, nk, |i, j| {
        (0..nt).fold(czero(), |acc, t| acc + rho[(full_index[i * nt + t], full_index[j * nt + t])])
    }))
}

/// Transposes the indices of every subsystem whose `mask` flag is true.
pub fn partial_transpose<T: Real>(rho: &ComplexMatrix<T>, dims: &[usize], mask: &[bool]) -> Result<ComplexMatrix<T>> {
    check_dims(rho.rows(), dims, "partial_transpose")?;
    if mask.len() != dims.len() || !rho.is_square() {
        return Err(Error::DimensionMismatch { context: "partial_transpose mask", expected: dims.len(), found: mask.len() });
    }
    let sys = Subsystems::new(dims);
    let n = rho.rows();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| sys.digits(i)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..dims.len() {
                if mask[k] {
                    di[k] = digits[j][k];
                    dj[k] = digits[i][k];
                } else {
                    di[k] = digits[i][k];
                    dj[k] = digits[j][k];
                }
            }
            out[(sys.index(&di), sys.index(&dj))] = rho[(i, j)];
        }
    }
    Ok(out)
}

/// A density operator on `A ⊗ B ⊗ C ⊗ D`, stored in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct FourPartyState<T> {
    pub dims: [usize; 4],
    pub matrix: ComplexMatrix<T>,
}

impl<T: Real> FourPartyState<T> {
    pub fn new(dims: [usize; 4], matrix: ComplexMatrix<T>) -> Result<Self> {
        check_dims(matrix.rows(), &dims, "four-party state")?;
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { context: "four-party state", expected: matrix.rows(), found: matrix.cols() });
        }
        Ok(Self { dims, matrix })
    }

    /// `ρ^{AB} ⊗ σ^{CD}`.
    pub fn from_pair(ab: &ComplexMatrix<T>, ab_shape: BipartiteShape, cd: &ComplexMatrix<T>, cd_shape: BipartiteShape) -> Result<Self> {
        Self::new([ab_shape.d_a, ab_shape.d_b, cd_shape.d_a, cd_shape.d_b], ab.kron(cd))
    }

    /// Same operator with subsystems reordered to `A ⊗ C ⊗ B ⊗ D`.
    pub fn regrouped_ac_bd(&self) -> Result<ComplexMatrix<T>> {
        permute_subsystems(&self.matrix, &self.dims, &AC_BD)
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        self.matrix.check_density(tol)
    }
}

/// Permutation between `A,B,C,D` and `A,C,B,D`; it is its own inverse.
pub const AC_BD: [usize; 4] = [0, 2, 1, 3];

/// Max-abs difference between `|Φ_{0,0}⟩^{AB}|Φ_{0,0}⟩^{CD}` and
/// `(1/d) Σ_{m,n} |Φ_{m,n}⟩^{AC}|Φ_{m,−n}⟩^{BD}`, both in `A⊗B⊗C⊗D` order.
pub fn schmidt_swap_check<T: Real>(dim: PrimeDimension) -> Result<T> {
    let d = dim.get();
    let lhs = phi_plus::<T>(dim).tensor(&phi_plus(dim));
    let mut acc = vec![czero::<T>(); d.pow(4)];
    for label in dim.labels() {
        // ordered A, C, B, D
        let term = phi_mn::<T>(dim, label).tensor(&phi_mn(dim, dim.label(label.m as i64, -(label.n as i64))));
        let term = term.permute(&AC_BD)?;
        for (a, &z) in acc.iter_mut().zip(term.amplitudes()) {
            *a = *a + z;
        }
    }
    let scale = T::from_count(d).recip();
    let rhs: Vec<Complex<T>> = acc.into_iter().map(|z| z * scale).collect();
    Ok(vec_max_abs_diff(lhs.amplitudes(), &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::build_pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn dim(d: usize) -> PrimeDimension {
        PrimeDimension::new(d).unwrap()
    }

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> M {
        M::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn random_density(n: usize, rng: &mut ChaCha8Rng) -> M {
        let g = random_matrix(n, rng);
        let rho = &g * &g.adjoint();
        let tr = rho.trace().re;
        rho.scale_real(1.0 / tr)
    }

    #[test]
    fn phi_plus_amplitudes() {
        let s2 = 0.5f64.sqrt();
        let p2 = phi_plus::<f64>(dim(2));
        assert_eq!(p2.shape(), Some(BipartiteShape::square(2)));
        assert!((p2.amplitude(&[0, 0]).re - s2).abs() < 1e-15 && (p2.amplitude(&[1, 1]).re - s2).abs() < 1e-15);
        assert_eq!(p2.amplitude(&[0, 1]), czero());
        for d in [2, 3, 5, 7] {
            assert!((phi_plus::<f64>(dim(d)).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_mn_examples() {
        let d3 = dim(3);
        let s = 1.0 / 3f64.sqrt();
        let x = phi_mn::<f64>(d3, PauliLabel::new(1, 0));
        for digits in [[1, 0], [2, 1], [0, 2]] {
            assert!((x.amplitude(&digits) - creal(s)).norm() < 1e-15);
        }
        let z = phi_mn::<f64>(d3, PauliLabel::new(0, 1));
        let w = d3.omega::<f64>();
        assert!((z.amplitude(&[0, 0]) - creal(s)).norm() < 1e-15);
        assert!((z.amplitude(&[1, 1]) - w * s).norm() < 1e-15);
        assert!((z.amplitude(&[2, 2]) - w * w * s).norm() < 1e-15);
        for d in [2, 3, 5] {
            assert_eq!(phi_mn::<f64>(dim(d), PauliLabel::new(0, 0)), phi_plus(dim(d)));
        }
    }

    #[test]
    fn maximally_entangled_basis_is_orthonormal() {
        for d in [2, 3, 5] {
            let kets: Vec<Ket<f64>> = dim(d).labels().map(|l| phi_mn(dim(d), l)).collect();
            for (i, a) in kets.iter().enumerate() {
                for (j, b) in kets.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((a.inner(b) - creal(expected)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn apply_local_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3] {
            let pd = dim(d);
            let p = phi_plus::<f64>(pd);
            for l in pd.labels() {
                let u = build_pauli(pd, l);
                let out = apply_local(&p, &u, &M::identity(d)).unwrap();
                assert!(out.max_abs_diff(&phi_mn(pd, l)) < 1e-14);
            }
            // (I ⊗ M)|Φ⁺⟩ = (Mᵀ ⊗ I)|Φ⁺⟩, checked against the dense Kronecker product
            let m = random_matrix(d, &mut rng);
            let lhs = M::identity(d).kron(&m).try_mul_vec(p.amplitudes()).unwrap();
            let rhs = m.transpose().kron(&M::identity(d)).try_mul_vec(p.amplitudes()).unwrap();
            assert!(vec_max_abs_diff(&lhs, &rhs) < 1e-10);
            let fast = apply_local(&p, &M::identity(d), &m).unwrap();
            assert!(vec_max_abs_diff(fast.amplitudes(), &lhs) < 1e-12);
            assert_eq!(apply_local(&p, &M::identity(d), &M::identity(d)).unwrap(), p);
        }
        let p = phi_plus::<f64>(dim(3));
        assert!(apply_local(&p, &M::identity(2), &M::identity(3)).is_err());
    }

    #[test]
    fn werner_examples() {
        let pure = werner_state(1.0f64).unwrap();
        assert!(pure.approx_eq(&phi_plus::<f64>(dim(2)).density(), 1e-15));
        let mixed = werner_state(0.25f64).unwrap();
        assert!(mixed.approx_eq(&M::identity(4).scale_real(0.25), 1e-15));
        let w = werner_state(0.7f64).unwrap();
        assert!((w.trace().re - 1.0).abs() < 1e-12);
        let ev = w.eigenvalues_hermitian().unwrap();
        for (a, b) in ev.iter().zip([0.1, 0.1, 0.1, 0.7]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(werner_state(1.2f64).is_err());
        assert!(werner_state(-0.1f64).is_err());
        assert!(werner_state(f64::NAN).is_err());
    }

    // Hand oracle: in the Bell basis the Werner state is diagonal with weights
    // (4p−1)/3 + (1−p)/3 on Φ⁺ and (1−p)/3 elsewhere.
    #[test]
    fn werner_is_diagonal_in_bell_basis() {
        let p = 0.7;
        let w = werner_state(p).unwrap();
        for l in dim(2).labels() {
            let b = phi_mn::<f64>(dim(2), l);
            let wb = w.try_mul_vec(b.amplitudes()).unwrap();
            let expect = if l == PauliLabel::new(0, 0) { p } else { (1.0 - p) / 3.0 };
            assert!(vec_max_abs_diff(&wb, &b.amplitudes().iter().map(|&z| z * expect).collect::<Vec<_>>()) < 1e-12);
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (a, b, c, d) = (random_matrix(2, &mut rng), random_matrix(3, &mut rng), random_matrix(2, &mut rng), random_matrix(3, &mut rng));
        let lhs = &a.tensor(&b) * &c.tensor(&d);
        let rhs = (&a * &c).tensor(&(&b * &d));
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn partial_trace_examples() {
        let p = phi_plus::<f64>(dim(2)).density();
        let half = M::identity(2).scale_real(0.5);
        assert!(partial_trace(&p, &[2, 2], &[true, false]).unwrap().approx_eq(&half, 1e-15));
        assert_eq!(partial_trace(&p, &[2, 2], &[true, true]).unwrap(), p);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ra = random_density(2, &mut rng);
        let rb = random_density(3, &mut rng);
        let prod = ra.kron(&rb);
        assert!(partial_trace(&prod, &[2, 3], &[false, true]).unwrap().approx_eq(&rb, 1e-12));
        assert!(partial_trace(&prod, &[2, 3], &[true, false]).unwrap().approx_eq(&ra, 1e-12));
        let all = partial_trace(&prod, &[2, 3], &[false, false]).unwrap();
        assert!((all[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(partial_trace(&prod, &[2, 2], &[true, false]).is_err());
    }

    #[test]
    fn partial_transpose_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ra = random_density(2, &mut rng);
        let rb = random_density(3, &mut rng);
        let pt = partial_transpose(&ra.kron(&rb), &[2, 3], &[false, true]).unwrap();
        assert!(pt.approx_eq(&ra.kron(&rb.transpose()), 1e-15));
        assert!(pt.min_eigenvalue().unwrap() >= -1e-12);

        let p = phi_plus::<f64>(dim(2)).density();
        let ppt = partial_transpose(&p, &[2, 2], &[false, true]).unwrap();
        assert!((ppt.min_eigenvalue().unwrap() + 0.5).abs() < 1e-10);
        assert!(ppt.is_hermitian(1e-15));
        let twice = partial_transpose(&ppt, &[2, 2], &[false, true]).unwrap();
        assert!(twice.approx_eq(&p, 1e-12));
    }

    #[test]
    fn partial_maps_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in [2, 3] {
            let dims = [d, d];
            let (x, y) = (random_matrix(d * d, &mut rng), random_matrix(d * d, &mut rng));
            let (s, t) = (Complex::new(0.3, -1.2), Complex::new(-0.7, 0.4));
            let combo = &x.scale(s) + &y.scale(t);
            for mask in [[true, false], [false, true]] {
                let lhs = partial_transpose(&combo, &dims, &mask).unwrap();
                let rhs = &partial_transpose(&x, &dims, &mask).unwrap().scale(s) + &partial_transpose(&y, &dims, &mask).unwrap().scale(t);
                assert!(lhs.approx_eq(&rhs, 1e-12));
                let lhs = partial_trace(&combo, &dims, &mask).unwrap();
                let rhs = &partial_trace(&x, &dims, &mask).unwrap().scale(s) + &partial_trace(&y, &dims, &mask).unwrap().scale(t);
                assert!(lhs.approx_eq(&rhs, 1e-12));
            }
        }
    }

    #[test]
    fn permutation_matches_kron_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (a, b, c) = (random_matrix(2, &mut rng), random_matrix(3, &mut rng), random_matrix(2, &mut rng));
        let abc = a.kron(&b).kron(&c);
        let cab = c.kron(&a).kron(&b);
        // new order (C, A, B) takes old positions (2, 0, 1)
        assert!(permute_subsystems(&abc, &[2, 3, 2], &[2, 0, 1]).unwrap().approx_eq(&cab, 1e-15));
        assert!(permute_subsystems(&abc, &[2, 3, 2], &[0, 0, 1]).is_err());

        let u = Ket::<f64>::basis(vec![2, 3, 2], Subsystems::new(&[2, 3, 2]).index(&[1, 2, 0]));
        let v = u.permute(&[2, 0, 1]).unwrap();
        assert_eq!(v.dims(), &[2, 2, 3]);
        assert_eq!(v.amplitude(&[0, 1, 2]), creal(1.0));
    }

    #[test]
    fn four_party_regrouping_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rho = random_density(2 * 4 * 2 * 2, &mut rng);
        let s = FourPartyState::new([2, 4, 2, 2], rho.clone()).unwrap();
        let ac_bd = s.regrouped_ac_bd().unwrap();
        let back = permute_subsystems(&ac_bd, &[2, 2, 4, 2], &AC_BD).unwrap();
        assert_eq!(back, rho);
        assert!(FourPartyState::new([2, 2, 2, 2], rho).is_err());
    }

    #[test]
    fn schmidt_swap_identity() {
        for d in [2, 3, 5] {
            assert!(schmidt_swap_check::<f64>(dim(d)).unwrap() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn phi_plus_invariant_under_paired_paulis() {
        for d in [2, 3, 5] {
            let pd = dim(d);
            let p = phi_plus::<f64>(pd);
            for l in pd.labels() {
                let a = build_pauli(pd, l);
                let c = build_pauli(pd, pd.label(l.m as i64, -(l.n as i64)));
                let out = apply_local(&p, &a, &c).unwrap();
                assert!(out.max_abs_diff(&p) < 1e-10, "d={d} {l}");
            }
        }
    }
}
