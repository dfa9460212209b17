//! LOCC-indistinguishability of full Pauli orbits via an
//! entanglement-breaking channel.
//!
//! `Λ(ρ) = (1/d²) Σ_{m,n} (U_{m,n} ⊗ U_{m,−n}) ρ (U_{m,n} ⊗ U_{m,−n})†` acting
//! on `A ⊗ C`. Fed `ρ^{AB} ⊗ Φ^{CD}_{0,0}`, it produces the detector state
//! `(1/d²) Σ ρ_{m,n}^{AB} ⊗ Φ_{m,−n}^{CD}`, separable across `AC : BD`. If the
//! orbit `{ρ_{m,n}}` is linearly independent, it cannot be discriminated by
//! LOCC, even probabilistically.
//!
//! Separability itself is not decided here. The certificate carries the
//! computable consequences: the regrouping identity residual and the
//! partial-transpose spectrum of the detector state.

use num_complex::Complex;
use serde::Serialize;

use crate::discrimination::{search_protocol, verify_protocol, DiscriminationProtocol, LabelSet, ProtocolReport};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::{MonomialMatrix, PauliLabel, PrimeDimension};
use crate::scalar::{creal, Real};
use crate::states::{partial_transpose, permute_subsystems, phi_mn, phi_plus, BipartiteShape, FourPartyState, Ket, Tensor, AC_BD};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL_RATIO: f64 = 1e-8;

/// The states `ρ_{m,n} = (U_{m,n} ⊗ I) ρ (U_{m,n} ⊗ I)†` for a set of labels.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitEnsemble<T> {
    dim: PrimeDimension,
    shape: BipartiteShape,
    seed: ComplexMatrix<T>,
    labels: Vec<PauliLabel>,
    members: Vec<ComplexMatrix<T>>,
}

fn local_pauli<T: Real>(dim: PrimeDimension, label: PauliLabel, rest: usize) -> MonomialMatrix<T> {
    MonomialMatrix::pauli(dim, label).kron(&MonomialMatrix::identity(rest))
}

impl<T: Real> OrbitEnsemble<T> {
    /// All `d²` members.
    pub fn full(dim: PrimeDimension, shape: BipartiteShape, seed: ComplexMatrix<T>, tol: T) -> Result<Self> {
        Self::partial(dim, shape, seed, dim.labels().collect(), tol)
    }

    /// Only the listed members. Such ensembles can be inspected but not certified.
    pub fn partial(dim: PrimeDimension, shape: BipartiteShape, seed: ComplexMatrix<T>, labels: Vec<PauliLabel>, tol: T) -> Result<Self> {
        if shape.d_a != dim.get() {
            return Err(Error::DimensionMismatch { context: "orbit seed first factor", expected: dim.get(), found: shape.d_a });
        }
        if seed.rows() != shape.total() {
            return Err(Error::DimensionMismatch { context: "orbit seed size", expected: shape.total(), found: seed.rows() });
        }
        seed.check_density(tol)?;
        let set = LabelSet::new(dim, labels)?;
        let members = set
            .labels()
            .iter()
            .map(|&l| {
                let mut out = ComplexMatrix::zeros(seed.rows(), seed.cols());
                local_pauli::<T>(dim, l, shape.d_b).conjugate_into(&seed, T::one(), &mut out);
                out
            })
            .collect();
        Ok(Self { dim, shape, seed, labels: set.labels().to_vec(), members })
    }

    /// Orbit of a pure seed `|ψ⟩⟨ψ|`.
    pub fn from_ket(dim: PrimeDimension, ket: &Ket<T>, tol: T) -> Result<Self> {
        let shape = ket.shape().ok_or_else(|| Error::InvalidInput("orbit seed ket must be bipartite".into()))?;
        Self::full(dim, shape, ket.normalized()?.density(), tol)
    }

    pub fn dim(&self) -> PrimeDimension {
        self.dim
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn seed(&self) -> &ComplexMatrix<T> {
        &self.seed
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    pub fn members(&self) -> &[ComplexMatrix<T>] {
        &self.members
    }

    pub fn is_full_orbit(&self) -> bool {
        self.labels.len() == self.dim.get() * self.dim.get()
    }
}

/// `Λ` applied to the leading `d²`-dimensional factor of `rho`, identity on the remaining `rest`.
fn channel_on_leading<T: Real>(dim: PrimeDimension, rho: &ComplexMatrix<T>, rest: usize) -> ComplexMatrix<T> {
    let d = dim.get();
    let weight = T::from_count(d * d).recip();
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for label in dim.labels() {
        let partner = dim.label(label.m as i64, -(label.n as i64));
        let kraus = MonomialMatrix::pauli(dim, label)
            .kron(&MonomialMatrix::pauli(dim, partner))
            .kron(&MonomialMatrix::identity(rest));
        kraus.conjugate_into(rho, weight, &mut out);
    }
    out
}

/// The trace-preserving channel `Λ` on a `d ⊗ d` operator.
pub fn apply_channel<T: Real>(dim: PrimeDimension, rho_ac: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = dim.get() * dim.get();
    if rho_ac.rows() != n || rho_ac.cols() != n {
        return Err(Error::DimensionMismatch { context: "channel input", expected: n, found: rho_ac.rows() });
    }
    Ok(channel_on_leading(dim, rho_ac, 1))
}

/// `(Λ^{AC} ⊗ I^{BD})` on a state stored in `A ⊗ B ⊗ C ⊗ D` order.
pub fn channel_on_four_party<T: Real>(dim: PrimeDimension, input: &FourPartyState<T>) -> Result<FourPartyState<T>> {
    let [da, db, dc, dd] = input.dims;
    if da != dim.get() || dc != dim.get() {
        return Err(Error::DimensionMismatch { context: "channel acts on A and C", expected: dim.get(), found: if da != dim.get() { da } else { dc } });
    }
    let grouped = input.regrouped_ac_bd()?;
    let mapped = channel_on_leading(dim, &grouped, db * dd);
    let back = permute_subsystems(&mapped, &[da, dc, db, dd], &AC_BD)?;
    FourPartyState::new(input.dims, back)
}

fn uniform_mixture<T: Real>(kets: &[Vec<Complex<T>>]) -> ComplexMatrix<T> {
    ComplexMatrix::gram_of_columns(kets).scale_real(T::from_count(kets.len()).recip())
}

/// Max-abs difference between `(1/d²) Σ Φ_{m,n}^{AB} ⊗ Φ_{m,−n}^{CD}` and
/// `(1/d²) Σ Φ_{k,l}^{AC} ⊗ Φ_{k,−l}^{BD}`, both in `A ⊗ B ⊗ C ⊗ D` order.
pub fn verify_symmetry_identity<T: Real>(dim: PrimeDimension) -> Result<T> {
    let partner = |l: PauliLabel| dim.label(l.m as i64, -(l.n as i64));
    let ab_cd: Vec<Vec<Complex<T>>> = dim
        .labels()
        .map(|l| phi_mn::<T>(dim, l).tensor(&phi_mn(dim, partner(l))).amplitudes().to_vec())
        .collect();
    let ac_bd = dim
        .labels()
        .map(|l| Ok(phi_mn::<T>(dim, l).tensor(&phi_mn(dim, partner(l))).permute(&AC_BD)?.amplitudes().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(uniform_mixture(&ab_cd).max_abs_diff(&uniform_mixture(&ac_bd)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectorState<T> {
    pub state: FourPartyState<T>,
    /// Max-abs difference between the explicit mixture and the channel output.
    pub consistency_residual: T,
}

/// `(1/d²) Σ ρ_{m,n}^{AB} ⊗ |Φ_{m,−n}⟩⟨Φ_{m,−n}|^{CD}`, cross-checked against
/// `(Λ^{AC} ⊗ I^{BD})(ρ^{AB} ⊗ Φ^{CD}_{0,0})`.
pub fn detector_state<T: Real>(ensemble: &OrbitEnsemble<T>, tol: T) -> Result<DetectorState<T>> {
    let dim = ensemble.dim;
    let d = dim.get();
    if !ensemble.is_full_orbit() {
        return Err(Error::NotFullOrbit { expected: d * d, found: ensemble.labels.len() });
    }
    let cd_shape = BipartiteShape::square(d);
    let n = ensemble.shape.total() * d * d;
    let mut mixture = ComplexMatrix::zeros(n, n);
    for (&label, member) in ensemble.labels.iter().zip(&ensemble.members) {
        let detector = phi_mn::<T>(dim, dim.label(label.m as i64, -(label.n as i64))).density();
        mixture = &mixture + &member.kron(&detector);
    }
    let mixture = mixture.scale_real(T::from_count(d * d).recip());

    let input = FourPartyState::from_pair(&ensemble.seed, ensemble.shape, &phi_plus::<T>(dim).density(), cd_shape)?;
    let via_channel = channel_on_four_party(dim, &input)?;
    let residual = mixture.max_abs_diff(&via_channel.matrix);
    if residual.is_nan() || residual > tol {
        return Err(Error::Consistency(format!("detector state paths differ by {:.3e}", residual.as_f64())));
    }
    Ok(DetectorState { state: FourPartyState::new(input.dims, mixture)?, consistency_residual: residual })
}

/// Minimum eigenvalue of the partial transpose across the `AC : BD` cut.
pub fn ppt_min_eigenvalue<T: Real>(state: &FourPartyState<T>) -> Result<T> {
    let [da, db, dc, dd] = state.dims;
    let grouped = state.regrouped_ac_bd()?;
    let pt = partial_transpose(&grouped, &[da, dc, db, dd], &[false, false, true, true])?;
    pt.min_eigenvalue()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceReport<T> {
    pub rank: usize,
    pub singular_values: Vec<T>,
    pub independent: bool,
}

/// Rank of the stacked, vectorized members.
pub fn linear_independence<T: Real>(ensemble: &OrbitEnsemble<T>, tol_ratio: T) -> IndependenceReport<T> {
    let rows: Vec<Vec<Complex<T>>> = ensemble.members.iter().map(ComplexMatrix::vectorize).collect();
    let stacked = ComplexMatrix::from_rows(rows).expect("members share one shape");
    let singular_values = stacked.singular_values();
    let cutoff = tol_ratio * singular_values.first().copied().unwrap_or(T::zero());
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    IndependenceReport { rank, independent: rank == ensemble.members.len(), singular_values }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndistinguishabilityEvidence<T> {
    pub rank: usize,
    pub singular_values: Vec<T>,
    pub symmetry_residual: T,
    pub detector_consistency_residual: T,
    pub ppt_min_eigenvalue: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Certificate<T> {
    DistinguishableWithProtocol { protocol: DiscriminationProtocol<T>, report: ProtocolReport<T> },
    CertifiedLoccIndistinguishable { evidence: IndistinguishabilityEvidence<T> },
    Inconclusive { reason: String, rank: Option<usize>, singular_values: Vec<T> },
}

impl<T> Certificate<T> {
    pub fn verdict(&self) -> &'static str {
        match self {
            Certificate::DistinguishableWithProtocol { .. } => "DistinguishableWithProtocol",
            Certificate::CertifiedLoccIndistinguishable { .. } => "CertifiedLoccIndistinguishable",
            Certificate::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_certified_indistinguishable(&self) -> bool {
        matches!(self, Certificate::CertifiedLoccIndistinguishable { .. })
    }
}

/// Certificate for a full orbit. Partial orbits are rejected.
pub fn certify<T: Real>(ensemble: &OrbitEnsemble<T>, tol: T) -> Result<Certificate<T>> {
    let d = ensemble.dim.get();
    if !ensemble.is_full_orbit() {
        return Err(Error::NotFullOrbit { expected: d * d, found: ensemble.labels.len() });
    }
    let independence = linear_independence(ensemble, T::lit(RANK_TOL_RATIO));
    if !independence.independent {
        return Ok(Certificate::Inconclusive {
            reason: format!("linearly dependent orbit (rank {} < {}); the no-go argument does not apply", independence.rank, d * d),
            rank: Some(independence.rank),
            singular_values: independence.singular_values,
        });
    }
    let symmetry_residual = verify_symmetry_identity::<T>(ensemble.dim)?;
    if symmetry_residual.is_nan() || symmetry_residual > tol {
        return Err(Error::Consistency(format!("regrouping identity residual {:.3e}", symmetry_residual.as_f64())));
    }
    let detector = detector_state(ensemble, tol)?;
    let ppt = ppt_min_eigenvalue(&detector.state)?;
    if ppt < -tol {
        return Err(Error::Consistency(format!("detector state has negative partial transpose ({:.3e})", ppt.as_f64())));
    }
    Ok(Certificate::CertifiedLoccIndistinguishable {
        evidence: IndistinguishabilityEvidence {
            rank: independence.rank,
            singular_values: independence.singular_values,
            symmetry_residual,
            detector_consistency_residual: detector.consistency_residual,
            ppt_min_eigenvalue: ppt,
        },
    })
}

/// Certificate for a set of maximally entangled states `|Φ_{m,n}⟩`: a
/// verified protocol if the family finds one, otherwise the orbit
/// certificate when the set is the full orbit of `|Φ⁺⟩`.
pub fn certify_label_set<T: Real>(set: &LabelSet, tol: T) -> Result<Certificate<T>> {
    if let Some(protocol) = search_protocol::<T>(set) {
        let report = verify_protocol(set, &protocol, tol)?;
        if report.passed {
            return Ok(Certificate::DistinguishableWithProtocol { protocol, report });
        }
        return Err(Error::Consistency(format!("protocol {} failed simulation", protocol.transform)));
    }
    let dim = set.dim();
    if set.len() == dim.get() * dim.get() {
        return certify(&OrbitEnsemble::from_ket(dim, &phi_plus(dim), tol)?, tol);
    }
    Ok(Certificate::Inconclusive {
        reason: "no transform in the family separates the X-powers and the set is not a full orbit".into(),
        rank: None,
        singular_values: Vec::new(),
    })
}

/// `(|00⟩ + |01⟩ + |12⟩ + |13⟩)/2` on `2 ⊗ 4`.
pub fn example2_seed<T: Real>() -> Ket<T> {
    let half = creal(T::lit(0.5));
    let mut amps = vec![creal(T::zero()); 8];
    for (a, b) in [(0, 0), (0, 1), (1, 2), (1, 3)] {
        amps[a * 4 + b] = half;
    }
    Ket::new(vec![2, 4], amps).expect("2x4 amplitudes")
}

/// The four kets `(U_{m,n} ⊗ I)|Ψ⟩` of the `2 ⊗ 4` example, in label order.
pub fn example2_kets<T: Real>() -> Vec<Ket<T>> {
    let qubit = PrimeDimension::new(2).expect("2 is prime");
    let seed = example2_seed::<T>();
    qubit
        .labels()
        .map(|l| Ket::new(vec![2, 4], local_pauli::<T>(qubit, l, 4).apply(seed.amplitudes())).expect("same shape"))
        .collect()
}

pub fn example2_ensemble<T: Real>(tol: T) -> Result<OrbitEnsemble<T>> {
    OrbitEnsemble::from_ket(PrimeDimension::new(2)?, &example2_seed(), tol)
}
