use thiserror::Error;

use crate::pauli::PauliLabel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not prime")]
    NotPrime(usize),

    #[error("label ({m},{n}) is out of range for d = {d}")]
    LabelOutOfRange { m: usize, n: usize, d: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("transform H_{alpha} is not defined for d = {d}")]
    InvalidTransform { d: usize, alpha: usize },

    #[error("label set is empty")]
    EmptyLabelSet,

    #[error("label {0} appears more than once")]
    DuplicateLabel(PauliLabel),

    #[error("label set has {count} labels but d\u{b2} = {max}")]
    TooManyLabels { count: usize, max: usize },

    #[error("label {0} is not in the protocol's label set")]
    LabelNotInSet(PauliLabel),

    #[error("Werner parameter p = {0} gives a non-positive state")]
    InvalidWerner(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("ensemble has {found} of the {expected} orbit members; certificates require the full orbit")]
    NotFullOrbit { expected: usize, found: usize },

    #[error("subset size l = {l} is outside 1..={max}")]
    InvalidSubsetSize { l: usize, max: usize },

    #[error("exhaustive enumeration of {count} subsets exceeds the cap of {cap}; use sampled mode")]
    TooManySubsets { count: u128, cap: u128 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
