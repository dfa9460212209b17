//! Constructive LOCC discrimination of maximally entangled states.
//!
//! A set of states `|Φ_{m_i,n_i}⟩` is identified by one round of local
//! computational-basis measurements once every `m_i` is distinct: the joint
//! outcome `(a, b)` always satisfies `a − b ≡ m (mod d)`. The search below
//! tries the identity and each `H_α` until the transformed X-powers separate.

use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halpha::TransformId;
use crate::linalg::ComplexMatrix;
use crate::pauli::{PauliLabel, PrimeDimension};
use crate::scalar::Real;
use crate::states::{apply_local, phi_mn};

/// Largest subset count [`verify_theorem`] will enumerate exhaustively.
pub const EXHAUSTIVE_CAP: u128 = 10_000_000;

/// How many failing subsets a [`TheoremSummary`] keeps.
pub const WITNESS_CAP: usize = 32;

/// Ordered, duplicate-free labels naming the ensemble `{|Φ_{m,n}⟩}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelSet {
    dim: PrimeDimension,
    labels: Vec<PauliLabel>,
}

impl LabelSet {
    pub fn new(dim: PrimeDimension, labels: Vec<PauliLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        let max = dim.get() * dim.get();
        if labels.len() > max {
            return Err(Error::TooManyLabels { count: labels.len(), max });
        }
        let mut seen = HashSet::new();
        for &l in &labels {
            dim.check(l)?;
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        Ok(Self { dim, labels })
    }

    pub fn dim(&self) -> PrimeDimension {
        self.dim
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: PauliLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

fn distinct_x_powers(labels: &[PauliLabel], scratch: &mut [bool]) -> bool {
    scratch.iter_mut().for_each(|s| *s = false);
    labels.iter().all(|l| !std::mem::replace(&mut scratch[l.m], true))
}

fn first_separating(dim: PrimeDimension, labels: &[PauliLabel], scratch: &mut [bool], image: &mut Vec<PauliLabel>) -> Option<TransformId> {
    TransformId::family(dim).into_iter().find(|t| {
        image.clear();
        image.extend(labels.iter().map(|&l| t.apply(dim, l).expect("family member and checked label")));
        distinct_x_powers(image, scratch)
    })
}

/// The label-level search: first transform (identity, then `H_0, H_1, …`)
/// making all X-powers distinct, with the transformed labels.
pub fn find_transform(set: &LabelSet) -> Option<(TransformId, Vec<PauliLabel>)> {
    let mut scratch = vec![false; set.dim.get()];
    let mut image = Vec::with_capacity(set.len());
    first_separating(set.dim, &set.labels, &mut scratch, &mut image).map(|t| (t, image))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecisionEntry {
    /// Transformed X-power `m′ = (a − b) mod d`.
    pub x_power: usize,
    pub state_index: usize,
    pub label: PauliLabel,
}

/// Local unitaries plus the classical decoder `m′ ↦ state index`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscriminationProtocol<T> {
    pub d: usize,
    pub transform: TransformId,
    pub labels: Vec<PauliLabel>,
    pub transformed_labels: Vec<PauliLabel>,
    pub alice_unitary: ComplexMatrix<T>,
    pub bob_unitary: ComplexMatrix<T>,
    /// Sorted by `x_power`.
    pub decision: Vec<DecisionEntry>,
}

impl<T: Real> DiscriminationProtocol<T> {
    /// Decodes Alice's outcome `a` and Bob's communicated outcome `b`.
    pub fn decide(&self, a: usize, b: usize) -> Option<usize> {
        let d = self.d;
        let x_power = (a + d - b % d) % d;
        self.decision.iter().find(|e| e.x_power == x_power).map(|e| e.state_index)
    }

    pub fn dim(&self) -> PrimeDimension {
        PrimeDimension::new(self.d).expect("protocol built from a prime dimension")
    }
}

/// Bob's operation: the entrywise conjugate `(U†)ᵀ` of Alice's unitary.
pub fn canonical_bob_unitary<T: Real>(alice: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    alice.conj()
}

/// Builds the full protocol for the first separating transform, if any.
pub fn search_protocol<T: Real>(set: &LabelSet) -> Option<DiscriminationProtocol<T>> {
    let (transform, transformed_labels) = find_transform(set)?;
    let alice_unitary = transform.unitary::<T>(set.dim).expect("family member is constructible");
    let bob_unitary = canonical_bob_unitary(&alice_unitary);
    let mut decision: Vec<DecisionEntry> = transformed_labels
        .iter()
        .enumerate()
        .map(|(i, t)| DecisionEntry { x_power: t.m, state_index: i, label: set.labels[i] })
        .collect();
    decision.sort_by_key(|e| e.x_power);
    Some(DiscriminationProtocol {
        d: set.dim.get(),
        transform,
        labels: set.labels.clone(),
        transformed_labels,
        alice_unitary,
        bob_unitary,
        decision,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Outcome<T> {
    pub a: usize,
    pub b: usize,
    pub probability: T,
}

/// Born-rule distribution over joint computational-basis outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub d: usize,
    /// Indexed `a·d + b`.
    pub probabilities: Vec<T>,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn probability(&self, a: usize, b: usize) -> T {
        self.probabilities[a * self.d + b]
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().copied().sum()
    }

    /// Outcomes with probability above `threshold`, in `(a, b)` order.
    pub fn support(&self, threshold: T) -> Vec<Outcome<T>> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > threshold)
            .map(|(i, &p)| Outcome { a: i / self.d, b: i % self.d, probability: p })
            .collect()
    }
}

/// Prepares `|Φ_prepared⟩`, applies both local unitaries and returns the exact
/// outcome distribution of the joint computational-basis measurement.
pub fn simulate_protocol<T: Real>(protocol: &DiscriminationProtocol<T>, prepared: PauliLabel) -> Result<OutcomeDistribution<T>> {
    if !protocol.labels.contains(&prepared) {
        return Err(Error::LabelNotInSet(prepared));
    }
    let ket = phi_mn::<T>(protocol.dim(), prepared);
    let out = apply_local(&ket, &protocol.alice_unitary, &protocol.bob_unitary)?;
    Ok(OutcomeDistribution { d: protocol.d, probabilities: out.amplitudes().iter().map(|z| z.norm_sqr()).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateReport<T> {
    pub index: usize,
    pub label: PauliLabel,
    pub transformed: PauliLabel,
    pub success_probability: T,
    pub support: Vec<Outcome<T>>,
    /// Every supported `(a, b)` has `a − b ≡ m′` and probability `1/d`.
    pub correlation_law: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolReport<T> {
    pub transform: TransformId,
    pub states: Vec<StateReport<T>>,
    pub disjoint_supports: bool,
    pub passed: bool,
}

/// Simulates every member of `set` and checks deterministic identification.
pub fn verify_protocol<T: Real>(set: &LabelSet, protocol: &DiscriminationProtocol<T>, tol: T) -> Result<ProtocolReport<T>> {
    if protocol.labels != set.labels || protocol.d != set.dim.get() {
        return Err(Error::InvalidInput("protocol was not built for this label set".into()));
    }
    let d = protocol.d;
    let uniform = T::from_count(d).recip();
    let mut states = Vec::with_capacity(set.len());
    let mut claimed: HashSet<(usize, usize)> = HashSet::new();
    let mut disjoint = true;
    for (index, (&label, &transformed)) in set.labels.iter().zip(&protocol.transformed_labels).enumerate() {
        let dist = simulate_protocol(protocol, label)?;
        let support = dist.support(tol);
        let success_probability: T = support
            .iter()
            .filter(|o| protocol.decide(o.a, o.b) == Some(index))
            .map(|o| o.probability)
            .sum();
        let correlation_law = support.len() == d
            && support.iter().all(|o| (o.a + d - o.b) % d == transformed.m && (o.probability - uniform).abs() <= tol);
        for o in &support {
            disjoint &= claimed.insert((o.a, o.b));
        }
        states.push(StateReport { index, label, transformed, success_probability, support, correlation_law });
    }
    let passed = disjoint
        && states.iter().all(|s| s.correlation_law && (s.success_probability - T::one()).abs() <= tol);
    Ok(ProtocolReport { transform: protocol.transform, states, disjoint_supports: disjoint, passed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub d: usize,
    pub l: usize,
    pub mode: SweepMode,
    /// `l(l−1)/2 ≤ d`: every subset must succeed.
    pub guaranteed: bool,
    pub tried: u64,
    pub successes: u64,
    pub failures: u64,
    pub failure_rate: f64,
    /// Up to [`WITNESS_CAP`] failing subsets, lexicographically smallest first.
    pub witnesses: Vec<Vec<PauliLabel>>,
    pub passed: bool,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn subset_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc · (n − i) / (i + 1) is exact at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Default)]
struct Tally {
    tried: u64,
    failures: u64,
    witnesses: Vec<Vec<PauliLabel>>,
}

impl Tally {
    fn record(&mut self, ok: bool, labels: &[PauliLabel]) {
        self.tried += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(labels.to_vec());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.tried += other.tried;
        self.failures += other.failures;
        self.witnesses.extend(other.witnesses);
        self
    }
}

/// Checks the search on every (or a seeded sample of) `l`-subset of the
/// `d²` labels. Results are independent of thread scheduling.
pub fn verify_theorem(dim: PrimeDimension, l: usize, mode: SweepMode) -> Result<TheoremSummary> {
    let d = dim.get();
    let n = d * d;
    if l == 0 || l > n {
        return Err(Error::InvalidSubsetSize { l, max: n });
    }
    let check = |indices: &[usize], scratch: &mut [bool], labels: &mut Vec<PauliLabel>, image: &mut Vec<PauliLabel>| {
        labels.clear();
        labels.extend(indices.iter().map(|&i| dim.label_at(i)));
        first_separating(dim, labels, scratch, image).is_some()
    };

    let mut tally = match mode {
        SweepMode::Exhaustive => {
            let count = subset_count(n, l);
            if count > EXHAUSTIVE_CAP {
                return Err(Error::TooManySubsets { count, cap: EXHAUSTIVE_CAP });
            }
            // partition by smallest element; partitions are already in lexicographic order
            let parts: Vec<Tally> = (0..n)
                .into_par_iter()
                .map(|first| {
                    let mut t = Tally::default();
                    let (mut scratch, mut labels, mut image) = (vec![false; d], Vec::new(), Vec::new());
                    for rest in (first + 1..n).combinations(l - 1) {
                        let mut idx = Vec::with_capacity(l);
                        idx.push(first);
                        idx.extend(rest);
                        let ok = check(&idx, &mut scratch, &mut labels, &mut image);
                        t.record(ok, &labels);
                    }
                    t
                })
                .collect();
            parts.into_iter().fold(Tally::default(), Tally::merge)
        }
        SweepMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<Vec<usize>> = (0..count)
                .map(|_| {
                    let mut v = rand::seq::index::sample(&mut rng, n, l).into_vec();
                    v.sort_unstable();
                    v
                })
                .collect();
            let parts: Vec<Tally> = samples
                .par_chunks(4096)
                .map(|chunk| {
                    let mut t = Tally::default();
                    let (mut scratch, mut labels, mut image) = (vec![false; d], Vec::new(), Vec::new());
                    for idx in chunk {
                        let ok = check(idx, &mut scratch, &mut labels, &mut image);
                        t.record(ok, &labels);
                    }
                    t
                })
                .collect();
            parts.into_iter().fold(Tally::default(), Tally::merge)
        }
    };
    tally.witnesses.sort();
    tally.witnesses.dedup();
    tally.witnesses.truncate(WITNESS_CAP);

    let guaranteed = l * (l - 1) / 2 <= d;
    let failure_rate = if tally.tried == 0 { 0.0 } else { tally.failures as f64 / tally.tried as f64 };
    Ok(TheoremSummary {
        d,
        l,
        mode,
        guaranteed,
        tried: tally.tried,
        successes: tally.tried - tally.failures,
        failures: tally.failures,
        failure_rate,
        witnesses: tally.witnesses,
        passed: !guaranteed || tally.failures == 0,
    })
}

/// Decision table as a map, for callers that prefer lookups.
pub fn decision_map<T: Real>(protocol: &DiscriminationProtocol<T>) -> BTreeMap<usize, usize> {
    protocol.decision.iter().map(|e| (e.x_power, e.state_index)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halpha::build_h_alpha;

    const TOL: f64 = 1e-10;

    fn dim(d: usize) -> PrimeDimension {
        PrimeDimension::new(d).unwrap()
    }

    fn set(d: usize, labels: &[(usize, usize)]) -> LabelSet {
        LabelSet::new(dim(d), labels.iter().map(|&(m, n)| PauliLabel::new(m, n)).collect()).unwrap()
    }

    #[test]
    fn label_set_validation() {
        let d3 = dim(3);
        assert!(matches!(LabelSet::new(d3, vec![]), Err(Error::EmptyLabelSet)));
        assert!(matches!(
            LabelSet::new(d3, vec![PauliLabel::new(1, 1), PauliLabel::new(1, 1)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(LabelSet::new(d3, vec![PauliLabel::new(0, 3)]), Err(Error::LabelOutOfRange { .. })));
        let all: Vec<_> = dim(2).labels().chain([PauliLabel::new(0, 0)]).collect();
        assert!(LabelSet::new(dim(2), all).is_err());
    }

    #[test]
    fn z_z2_x_uses_h0() {
        let s = set(3, &[(0, 1), (0, 2), (1, 0)]);
        let p = search_protocol::<f64>(&s).unwrap();
        assert_eq!(p.transform, TransformId::Alpha(0));
        assert_eq!(p.transformed_labels, vec![PauliLabel::new(1, 0), PauliLabel::new(2, 0), PauliLabel::new(0, 2)]);
        assert_eq!(decision_map(&p), BTreeMap::from([(0, 2), (1, 0), (2, 1)]));
        let report = verify_protocol(&s, &p, TOL).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn x_z_xz_needs_h2() {
        let s = set(3, &[(1, 0), (0, 1), (1, 1)]);
        let mut scratch = vec![false; 3];
        for t in [TransformId::Identity, TransformId::Alpha(0), TransformId::Alpha(1)] {
            let image: Vec<_> = s.labels().iter().map(|&l| t.apply(dim(3), l).unwrap()).collect();
            assert!(!distinct_x_powers(&image, &mut scratch), "{t}");
        }
        let p = search_protocol::<f64>(&s).unwrap();
        assert_eq!(p.transform, TransformId::Alpha(2));
        assert_eq!(p.transformed_labels, vec![PauliLabel::new(2, 2), PauliLabel::new(1, 0), PauliLabel::new(0, 2)]);
        assert!(verify_protocol(&s, &p, TOL).unwrap().passed);
    }

    #[test]
    fn four_bell_states_have_no_protocol() {
        let s = set(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(search_protocol::<f64>(&s).is_none());
    }

    #[test]
    fn simulation_examples() {
        let s = set(3, &[(1, 0), (0, 0), (2, 1)]);
        let p = search_protocol::<f64>(&s).unwrap();
        assert_eq!(p.transform, TransformId::Identity);
        let dist = simulate_protocol(&p, PauliLabel::new(1, 0)).unwrap();
        let support: Vec<_> = dist.support(1e-12).iter().map(|o| (o.a, o.b)).collect();
        assert_eq!(support, vec![(0, 2), (1, 0), (2, 1)]);
        for o in dist.support(1e-12) {
            assert!((o.probability - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((dist.total() - 1.0).abs() < 1e-12);

        let bell = set(2, &[(0, 0), (1, 0)]);
        let p = search_protocol::<f64>(&bell).unwrap();
        let dist = simulate_protocol(&p, PauliLabel::new(0, 0)).unwrap();
        assert!((dist.probability(0, 0) - 0.5).abs() < 1e-12 && (dist.probability(1, 1) - 0.5).abs() < 1e-12);
        assert!(simulate_protocol(&p, PauliLabel::new(1, 1)).is_err());

        let worked = set(3, &[(1, 0), (0, 1), (1, 1)]);
        let p = search_protocol::<f64>(&worked).unwrap();
        let dist = simulate_protocol(&p, PauliLabel::new(1, 0)).unwrap();
        for o in dist.support(1e-12) {
            assert_eq!((o.a + 3 - o.b) % 3, 2);
        }
    }

    #[test]
    fn singleton_is_trivial() {
        let s = set(3, &[(1, 0)]);
        let p = search_protocol::<f64>(&s).unwrap();
        assert_eq!(p.transform, TransformId::Identity);
        assert_eq!(p.alice_unitary, ComplexMatrix::identity(3));
        assert!(verify_protocol(&s, &p, TOL).unwrap().passed);
    }

    #[test]
    fn bob_unitary_is_entrywise_conjugate() {
        let h2 = build_h_alpha::<f64>(dim(2), 0).unwrap().matrix;
        assert_eq!(canonical_bob_unitary(&h2), h2);
        let h0 = build_h_alpha::<f64>(dim(3), 0).unwrap().matrix;
        let b = canonical_bob_unitary(&h0);
        assert!(b.approx_eq(&h0.adjoint().transpose(), 1e-15));
        let w = dim(3).omega::<f64>();
        let s = 1.0 / 3f64.sqrt();
        assert!((b[(1, 1)] - w * s).norm() < 1e-12);
        assert_eq!(canonical_bob_unitary(&ComplexMatrix::<f64>::identity(3)), ComplexMatrix::identity(3));
    }

    #[test]
    fn superset_of_failing_set_fails() {
        let bell = set(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(find_transform(&bell).is_none());
        // every 4-subset of the d = 3 labels that contains a failing 3-subset also fails
        let d3 = dim(3);
        let failing: Vec<Vec<usize>> = (0..9)
            .combinations(3)
            .filter(|c| find_transform(&LabelSet::new(d3, c.iter().map(|&i| d3.label_at(i)).collect()).unwrap()).is_none())
            .collect();
        for sup in (0..9).combinations(4) {
            if failing.iter().any(|f| f.iter().all(|i| sup.contains(i))) {
                let s = LabelSet::new(d3, sup.iter().map(|&i| d3.label_at(i)).collect()).unwrap();
                assert!(find_transform(&s).is_none());
            }
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subset_count(9, 3), 84);
        assert_eq!(subset_count(49, 4), 211_876);
        assert_eq!(subset_count(4, 4), 1);
        assert_eq!(subset_count(3, 4), 0);
        assert_eq!(subset_count(400, 200), u128::MAX);
    }

    #[test]
    fn small_theorem_sweeps() {
        let s = verify_theorem(dim(3), 3, SweepMode::Exhaustive).unwrap();
        assert_eq!((s.tried, s.failures), (84, 0));
        assert!(s.passed && s.guaranteed);
        let s = verify_theorem(dim(2), 4, SweepMode::Exhaustive).unwrap();
        assert_eq!((s.tried, s.successes), (1, 0));
        assert!(!s.guaranteed && s.passed);
        assert_eq!(s.witnesses.len(), 1);
        assert!(verify_theorem(dim(2), 5, SweepMode::Exhaustive).is_err());
        assert!(matches!(verify_theorem(dim(13), 6, SweepMode::Exhaustive), Err(Error::TooManySubsets { .. })));
    }

    #[test]
    fn sampled_sweep_is_reproducible() {
        let mode = SweepMode::Sampled { count: 500, seed: 9 };
        let a = verify_theorem(dim(7), 5, mode).unwrap();
        let b = verify_theorem(dim(7), 5, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tried, 500);
    }
}
