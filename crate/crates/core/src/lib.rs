//! Local discrimination of generalized-Pauli ensembles of bipartite states.
//!
//! Two complementary tools live here:
//!
//! * [`discrimination`] builds and exactly simulates one-round LOCC protocols
//!   for sets of maximally entangled states `|Φ_{m,n}⟩` in prime dimension,
//!   using the [`halpha`] transform family to separate X-powers.
//! * [`indistinguishability`] certifies that full Pauli orbits of a seed state
//!   cannot be discriminated by LOCC at all, via an entanglement-breaking
//!   channel and its detector state.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the common `f64` instantiation.

pub mod discrimination;
pub mod error;
pub mod halpha;
pub mod indistinguishability;
pub mod linalg;
pub mod pauli;
pub mod scalar;
pub mod states;

pub use discrimination::{
    canonical_bob_unitary, search_protocol, simulate_protocol, verify_protocol, verify_theorem, LabelSet, SweepMode,
    TheoremSummary,
};
pub use error::{Error, Result};
pub use halpha::{build_h_alpha, label_action, verify_conjugation, TransformId};
pub use indistinguishability::{certify, detector_state, linear_independence, ppt_min_eigenvalue, Certificate, OrbitEnsemble};
pub use linalg::ComplexMatrix;
pub use pauli::{build_pauli, build_x, build_z, commutation_phase, equal_up_to_phase, PauliLabel, PrimeDimension};
pub use scalar::Real;
pub use states::{phi_mn, phi_plus, werner_state, BipartiteShape, FourPartyState, Ket};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Matrix32 = ComplexMatrix<f32>;
pub type Ket64 = Ket<f64>;
pub type Protocol = discrimination::DiscriminationProtocol<f64>;
pub type Distribution = discrimination::OutcomeDistribution<f64>;
pub type Ensemble = OrbitEnsemble<f64>;
pub type Certificate64 = Certificate<f64>;
pub type FourParty = FourPartyState<f64>;
