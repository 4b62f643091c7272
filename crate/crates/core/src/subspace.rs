//! Subspaces spanned by computational basis states and the exhaustive
//! classification of subsystems into bundles.
//!
//! Two subsystems `A1`, `A2` are equivalent over a basis-state set `R` when
//! the unordered pair of partitions `{R/~A1, R/~A1ᶜ}` equals
//! `{R/~A2, R/~A2ᶜ}`, where `ψ ~A φ` iff the two states agree on every qubit
//! of `A`. Equivalent subsystems have identical entanglement spectra for every
//! state in `span(R)`. The brute-force machinery here serves as the oracle for
//! the polynomial-time engine in [`crate::embeddings`].

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Largest qubit count accepted by exhaustive subset enumeration.
pub const MAX_ENUMERATION_QUBITS: usize = 22;

/// One computational basis state; coordinate `i` is qubit `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisState(pub BitVector);

impl BasisState {
    pub fn parse(s: &str) -> Result<Self> {
        BitVector::parse_bits(s).map(BasisState)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    /// Index into a `2^n` amplitude vector with qubit 1 as the most
    /// significant bit.
    pub fn amplitude_index(&self) -> usize {
        let n = self.n();
        self.0.iter_ones().fold(0usize, |acc, i| acc | 1 << (n - 1 - i))
    }

    pub fn from_amplitude_index(n: usize, index: usize) -> Self {
        BasisState(BitVector::from_indices(n, (0..n).filter(|&i| index >> (n - 1 - i) & 1 == 1)))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.0)
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    states: Vec<BasisState>,
}

/// An ordered set `R` of distinct basis states on `n` qubits.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    n: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.states == other.states
    }
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::new(r.n, r.states)
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr { n: s.n, states: s.states }
    }
}

impl Subspace {
    pub fn new(n: usize, states: Vec<BasisState>) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if s.n() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: s.n(), context: "basis state length" });
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::input(format!("basis state {s} listed twice")));
            }
        }
        Ok(Subspace { n, states, index })
    }

    /// Convenience constructor from bit strings such as `"0101"`.
    pub fn from_strs(states: &[&str]) -> Result<Self> {
        let parsed = states.iter().map(|s| BasisState::parse(s)).collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map_or(0, BasisState::n);
        Subspace::new(n, parsed)
    }

    /// Every basis state of `n` qubits.
    pub fn full(n: usize) -> Result<Self> {
        if n > MAX_ENUMERATION_QUBITS {
            return Err(Error::Resource { what: "qubit count", value: n, limit: MAX_ENUMERATION_QUBITS });
        }
        Subspace::new(n, (0..1usize << n).map(|i| BasisState::from_amplitude_index(n, i)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn position(&self, s: &BasisState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &BasisState) -> bool {
        self.index.contains_key(s)
    }

    /// A copy with the state at `position` removed.
    pub fn without(&self, position: usize) -> Subspace {
        let mut states = self.states.clone();
        states.remove(position);
        Subspace::new(self.n, states).expect("subset of a valid subspace")
    }
}

/// A subset of qubits. Public indices are 1-based, as in `[n] = {1..n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subsystem {
    mask: BitVector,
}

impl Subsystem {
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut mask = BitVector::zeros(n);
        for &q in qubits {
            if q == 0 || q > n {
                return Err(Error::input(format!("qubit index {q} outside 1..={n}")));
            }
            if mask.get(q - 1) {
                return Err(Error::input(format!("qubit index {q} repeated")));
            }
            mask.set(q - 1, true);
        }
        Ok(Subsystem { mask })
    }

    /// Coordinate `i` of `mask` selects qubit `i + 1`.
    pub fn from_mask(mask: BitVector) -> Self {
        Subsystem { mask }
    }

    /// Bit `i` of `mask` selects qubit `i + 1`.
    pub fn from_u64(n: usize, mask: u64) -> Self {
        Subsystem { mask: BitVector::from_u64(n, mask) }
    }

    pub fn empty(n: usize) -> Self {
        Subsystem { mask: BitVector::zeros(n) }
    }

    pub fn all(n: usize) -> Self {
        Subsystem { mask: BitVector::ones(n) }
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &BitVector {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_empty() || self.len() == self.n()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        qubit >= 1 && qubit <= self.n() && self.mask.get(qubit - 1)
    }

    /// Member qubits, 1-based, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        self.mask.iter_ones().map(|i| i + 1).collect()
    }

    /// Member positions, 0-based, ascending.
    pub fn positions(&self) -> Vec<usize> {
        self.mask.iter_ones().collect()
    }

    pub fn complement(&self) -> Subsystem {
        Subsystem { mask: self.mask.not() }
    }

    /// The side of `{A, Aᶜ}` that contains qubit 1.
    pub fn canonical_side(&self) -> Subsystem {
        if self.n() == 0 || self.mask.get(0) {
            self.clone()
        } else {
            self.complement()
        }
    }

    /// Size of the smaller side of `{A, Aᶜ}`.
    pub fn bipartition_size(&self) -> usize {
        self.len().min(self.n() - self.len())
    }

    /// Dense identifier of the unordered bipartition `{A, Aᶜ}`: the canonical
    /// side's mask with qubit 1 dropped. The trivial pair gets `2^(n-1) - 1`.
    pub fn bipartition_id(&self) -> u64 {
        self.canonical_side().mask.low_word() >> 1
    }

    /// Inverse of [`Subsystem::bipartition_id`]; returns the canonical side.
    pub fn from_bipartition_id(n: usize, id: u64) -> Subsystem {
        Subsystem::from_u64(n, id << 1 | 1)
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, q) in self.qubits().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subsystem{self}")
    }
}

/// `R/~A`: a partition of state positions, classes ordered by their first
/// member, members ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientSet {
    pub classes: Vec<Vec<usize>>,
}

impl QuotientSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class label per state, labels assigned in order of first appearance.
    pub fn labels(&self) -> Vec<u32> {
        let total = self.classes.iter().map(Vec::len).sum();
        let mut labels = vec![0u32; total];
        for (k, class) in self.classes.iter().enumerate() {
            for &i in class {
                labels[i] = k as u32;
            }
        }
        labels
    }

    /// Whether every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &QuotientSet) -> bool {
        let labels = coarser.labels();
        self.classes.iter().all(|c| c.iter().all(|&i| labels[i] == labels[c[0]]))
    }
}

/// `ψ_A`: the bits of `s` on `a`, in ascending qubit order.
pub fn restrict_state(s: &BasisState, a: &Subsystem) -> BitVector {
    s.0.select(&a.positions())
}

pub fn quotient_set(r: &Subspace, a: &Subsystem) -> QuotientSet {
    let labels = partition_labels(r, a.mask());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if l as usize == classes.len() {
            classes.push(Vec::new());
        }
        classes[l as usize].push(i);
    }
    QuotientSet { classes }
}

/// Canonical labelling of `R/~A`: label of state `i` is the number of
/// distinct restrictions seen before its own first occurrence. Equal label
/// vectors mean equal partitions.
pub fn partition_labels(r: &Subspace, mask: &BitVector) -> Vec<u32> {
    let mut seen: HashMap<BitVector, u32> = HashMap::with_capacity(r.len());
    r.states
        .iter()
        .map(|s| {
            let key = s.0.and(mask);
            let next = seen.len() as u32;
            *seen.entry(key).or_insert(next)
        })
        .collect()
}

fn partition_labels_u64(words: &[u64], mask: u64) -> Vec<u32> {
    let mut seen: HashMap<u64, u32> = HashMap::with_capacity(words.len());
    words
        .iter()
        .map(|w| {
            let next = seen.len() as u32;
            *seen.entry(w & mask).or_insert(next)
        })
        .collect()
}

/// Whether `a1 ~R a2`.
pub fn subsystems_equivalent(r: &Subspace, a1: &Subsystem, a2: &Subsystem) -> bool {
    let p1 = partition_labels(r, a1.mask());
    let p1c = partition_labels(r, a1.complement().mask());
    let p2 = partition_labels(r, a2.mask());
    let p2c = partition_labels(r, a2.complement().mask());
    (p1 == p2 && p1c == p2c) || (p1 == p2c && p1c == p2)
}

/// An equivalence class of subsystems. Stored as the canonical sides (those
/// containing qubit 1) of its unordered bipartitions; every member's
/// complement is also a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub bipartitions: Vec<Subsystem>,
}

impl Bundle {
    pub fn representative(&self) -> &Subsystem {
        &self.bipartitions[0]
    }

    /// Every subsystem in the bundle: each canonical side and its complement.
    pub fn members(&self) -> Vec<Subsystem> {
        let mut out: Vec<Subsystem> = self.bipartitions.iter().flat_map(|a| [a.clone(), a.complement()]).collect();
        out.sort();
        out
    }

    pub fn num_bipartitions(&self) -> usize {
        self.bipartitions.len()
    }

    pub fn num_members(&self) -> usize {
        2 * self.bipartitions.len()
    }

    pub fn contains(&self, a: &Subsystem) -> bool {
        self.bipartitions.contains(&a.canonical_side())
    }

    pub fn is_trivial(&self) -> bool {
        self.bipartitions.iter().all(Subsystem::is_trivial)
    }
}

/// All bundles of `𝒫([n])` with a lookup from bipartition id to bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    n: usize,
    bundles: Vec<Bundle>,
    bundle_of: Vec<u32>,
}

impl Classification {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<Bundle> {
        self.bundles
    }

    /// Index into [`Classification::bundles`] of the bundle containing `a`.
    pub fn bundle_index(&self, a: &Subsystem) -> usize {
        self.bundle_of[a.bipartition_id() as usize] as usize
    }

    pub fn same_bundle(&self, a: &Subsystem, b: &Subsystem) -> bool {
        self.bundle_index(a) == self.bundle_index(b)
    }
}

fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_QUBITS {
        return Err(Error::Resource { what: "qubit count", value: n, limit: MAX_ENUMERATION_QUBITS });
    }
    if n == 0 {
        return Err(Error::input("cannot classify subsystems of zero qubits"));
    }
    Ok(())
}

/// Groups all subsystems of `n` qubits into bundles, where `key(mask)` is a
/// canonical, hashable description of whatever determines a subsystem's
/// class on one side (a quotient partition, an operator set, ...). Two
/// subsystems share a bundle iff their unordered `{key(A), key(Aᶜ)}` pairs
/// coincide.
pub fn classify_by_key<K, F>(n: usize, key: F) -> Result<Classification>
where
    K: Hash + Eq + Send,
    F: Fn(u64) -> K + Sync,
{
    check_enumerable(n)?;
    let total = 1u64 << n;
    let full = total - 1;
    const CHUNK: u64 = 1 << 14;

    // Intern keys chunk by chunk so memory stays bounded by distinct keys.
    let mut intern: HashMap<K, u32> = HashMap::new();
    let mut key_id = vec![0u32; total as usize];
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let keys: Vec<K> = (start..end).into_par_iter().map(&key).collect();
        for (offset, k) in keys.into_iter().enumerate() {
            let next = intern.len() as u32;
            key_id[(start as usize) + offset] = *intern.entry(k).or_insert(next);
        }
        start = end;
    }

    let half = 1u64 << (n - 1);
    let mut bundle_by_pair: HashMap<(u32, u32), u32> = HashMap::new();
    let mut bundles: Vec<Bundle> = Vec::new();
    let mut bundle_of = vec![0u32; half as usize];
    for id in 0..half {
        let mask = id << 1 | 1;
        let a = key_id[mask as usize];
        let b = key_id[(full ^ mask) as usize];
        let pair = (a.min(b), a.max(b));
        let next = bundles.len() as u32;
        let slot = *bundle_by_pair.entry(pair).or_insert(next);
        if slot == next {
            bundles.push(Bundle { bipartitions: Vec::new() });
        }
        bundles[slot as usize].bipartitions.push(Subsystem::from_u64(n, mask));
        bundle_of[id as usize] = slot;
    }
    Ok(Classification { n, bundles, bundle_of })
}

/// Exhaustive classification of `𝒫([n])` under `~R` using quotient sets.
pub fn classify_subspace(r: &Subspace) -> Result<Classification> {
    check_enumerable(r.n())?;
    let words: Vec<u64> = r.states().iter().map(|s| s.0.low_word()).collect();
    classify_by_key(r.n(), |mask| partition_labels_u64(&words, mask))
}

/// The set of all bundles of `R`, ordered by smallest canonical member. The
/// trivial bipartition `{∅, [n]}` is included.
pub fn enumerate_bundles(r: &Subspace) -> Result<Vec<Bundle>> {
    classify_subspace(r).map(Classification::into_bundles)
}

/// A family `R_n` of `n` states with subsystems `{1}` and `{2,3}` that are
/// not equivalent yet give equal spectra for every pure state in `span(R_n)`.
///
/// `R_4 = {0000, 0001, 1010, 1100}`; for larger `n`, the first state is
/// `0…01` and state `i` is state `i-1` of `R_(n-1)` followed by a `0`.
pub fn counterexample_family(n: usize) -> Result<(Subspace, Subsystem, Subsystem)> {
    if n < 4 {
        return Err(Error::input(format!("counterexample family needs n >= 4, got {n}")));
    }
    let mut states: Vec<String> = ["0000", "0001", "1010", "1100"].iter().map(|s| s.to_string()).collect();
    for m in 5..=n {
        let mut next = Vec::with_capacity(m);
        next.push(format!("{}1", "0".repeat(m - 1)));
        next.extend(states.iter().map(|s| format!("{s}0")));
        states = next;
    }
    let refs: Vec<&str> = states.iter().map(String::as_str).collect();
    let r = Subspace::from_strs(&refs)?;
    Ok((r, Subsystem::from_qubits(n, &[1])?, Subsystem::from_qubits(n, &[2, 3])?))
}
