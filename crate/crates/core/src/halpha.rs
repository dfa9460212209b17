//! The `H_α` family of local unitaries and their action on Pauli labels.
//!
//! `(H_α)_{jk} = ω^{−jk} ω^{−α s_k} / √d` with `s_k = k + (k+1) + … + (d−1)`.
//! Conjugation sends `X^m Z^n` to `X^{αm+n} Z^{−m}` up to a global phase, so
//! the label action is exact modular arithmetic and phases are extracted
//! numerically by [`verify_conjugation`].
//!
//! For `d = 2` only `H_0` (the Hadamard) is admitted: there `s_0 = s_1 = 1`
//! makes `H_1 = −H_0`.

use std::fmt;

use num_complex::Complex;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::{build_pauli, equal_up_to_phase, PauliLabel, PrimeDimension};
use crate::scalar::Real;

/// Which member of the transform family a protocol uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformId {
    Identity,
    Alpha(usize),
}

impl TransformId {
    /// Search order: identity first, then `H_0, H_1, …`.
    pub fn family(dim: PrimeDimension) -> Vec<TransformId> {
        let alphas = if dim.get() == 2 { 1 } else { dim.get() };
        std::iter::once(TransformId::Identity).chain((0..alphas).map(TransformId::Alpha)).collect()
    }

    pub fn apply(self, dim: PrimeDimension, label: PauliLabel) -> Result<PauliLabel> {
        match self {
            TransformId::Identity => Ok(identity_action(label)),
            TransformId::Alpha(alpha) => label_action(dim, alpha, label),
        }
    }

    pub fn unitary<T: Real>(self, dim: PrimeDimension) -> Result<ComplexMatrix<T>> {
        match self {
            TransformId::Identity => Ok(ComplexMatrix::identity(dim.get())),
            TransformId::Alpha(alpha) => Ok(build_h_alpha(dim, alpha)?.matrix),
        }
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformId::Identity => write!(f, "identity"),
            TransformId::Alpha(a) => write!(f, "H_{a}"),
        }
    }
}

impl Serialize for TransformId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HAlphaTransform<T> {
    pub dim: PrimeDimension,
    pub alpha: usize,
    /// `s_k mod d`.
    pub s: Vec<usize>,
    /// Normalized (unitary) matrix.
    pub matrix: ComplexMatrix<T>,
}

fn check_alpha(dim: PrimeDimension, alpha: usize) -> Result<()> {
    let d = dim.get();
    if alpha >= d || (d == 2 && alpha != 0) {
        return Err(Error::InvalidTransform { d, alpha });
    }
    Ok(())
}

/// `s_k = Σ_{i=k}^{d−1} i`, reduced mod `d`.
pub fn s_sequence(dim: PrimeDimension) -> Vec<usize> {
    let d = dim.get();
    (0..d).map(|k| (k..d).sum::<usize>() % d).collect()
}

/// Exponent `e` with unnormalized entry `(H_α)_{jk} = ω^e`, reduced mod `d`.
pub fn entry_exponent(dim: PrimeDimension, alpha: usize, j: usize, k: usize) -> usize {
    let s = s_sequence(dim);
    dim.residue(-((j * k) as i64) - (alpha * s[k]) as i64)
}

pub fn build_h_alpha<T: Real>(dim: PrimeDimension, alpha: usize) -> Result<HAlphaTransform<T>> {
    check_alpha(dim, alpha)?;
    let d = dim.get();
    let s = s_sequence(dim);
    let norm = T::from_count(d).sqrt().recip();
    let matrix = ComplexMatrix::from_fn(d, d, |j, k| {
        dim.omega_pow::<T>(-((j * k) as i64) - (alpha * s[k]) as i64) * norm
    });
    Ok(HAlphaTransform { dim, alpha, s, matrix })
}

/// `(m, n) ↦ (αm + n, −m) mod d`.
pub fn label_action(dim: PrimeDimension, alpha: usize, label: PauliLabel) -> Result<PauliLabel> {
    check_alpha(dim, alpha)?;
    dim.check(label)?;
    Ok(dim.label((alpha * label.m + label.n) as i64, -(label.m as i64)))
}

pub fn identity_action(label: PauliLabel) -> PauliLabel {
    label
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugationEntry<T> {
    pub label: PauliLabel,
    pub image: PauliLabel,
    /// `φ` with `H_α U_label H_α† = φ U_image`.
    pub phase: Complex<T>,
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugationReport<T> {
    pub d: usize,
    pub alpha: usize,
    pub entries: Vec<ConjugationEntry<T>>,
    pub max_residual: T,
    /// Largest `||φ| − 1|` over all entries.
    pub max_phase_deviation: T,
}

/// Conjugates every Pauli by `H_α` and matches the result against the label
/// action up to a unit phase. Any mismatch is reported as an error.
pub fn verify_conjugation<T: Real>(dim: PrimeDimension, alpha: usize, tol: T) -> Result<ConjugationReport<T>> {
    let h = build_h_alpha::<T>(dim, alpha)?.matrix;
    let h_dag = h.adjoint();
    let mut entries = Vec::with_capacity(dim.get() * dim.get());
    let (mut max_residual, mut max_dev) = (T::zero(), T::zero());
    for label in dim.labels() {
        let image = label_action(dim, alpha, label)?;
        let conj = &(&h * &build_pauli(dim, label)) * &h_dag;
        let target = build_pauli::<T>(dim, image);
        let phase = equal_up_to_phase(&conj, &target, tol).ok_or_else(|| {
            Error::Consistency(format!("H_{alpha} U{label} H_{alpha}^dag is not a phase times U{image} at d = {dim}"))
        })?;
        let residual = conj.max_abs_diff(&target.scale(phase));
        max_residual = max_residual.max(residual);
        max_dev = max_dev.max((phase.norm() - T::one()).abs());
        entries.push(ConjugationEntry { label, image, phase, residual });
    }
    Ok(ConjugationReport { d: dim.get(), alpha, entries, max_residual, max_phase_deviation: max_dev })
}
