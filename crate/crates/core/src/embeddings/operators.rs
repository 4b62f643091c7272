//! Product operators over vertex supports, operator sets as GF(2) spans, and
//! a brute-force checker for the generator-set axioms.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::gf2::{BitVector, Gf2Matrix};
use crate::subspace::{BasisState, Subspace};

/// `Λ_W` (or `Γ_W`): the product of the single-vertex generators over `W`.
/// On physical states it flips every qubit whose vertex support meets `W`
/// an odd number of times.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductOperator {
    support: BitVector,
}

impl ProductOperator {
    pub fn new(support: BitVector) -> Self {
        ProductOperator { support }
    }

    pub fn identity(num_vertices: usize) -> Self {
        ProductOperator::new(BitVector::zeros(num_vertices))
    }

    /// The generator of a single vertex position.
    pub fn single(num_vertices: usize, vertex: usize) -> Self {
        ProductOperator::new(BitVector::unit(num_vertices, vertex))
    }

    pub fn support(&self) -> &BitVector {
        &self.support
    }

    /// `Λ_{V1} Λ_{V2} = Λ_{V1 △ V2}`.
    pub fn compose(&self, other: &ProductOperator) -> ProductOperator {
        ProductOperator::new(self.support.xor(&other.support))
    }

    /// Physical flip pattern given the qubit-by-vertex support matrix.
    pub fn flip_mask(&self, supports: &Gf2Matrix) -> BitVector {
        supports.mul_vec(&self.support).expect("support length equals vertex count")
    }
}

impl fmt::Debug for ProductOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ[{}]", self.support)
    }
}

/// A set of product operators closed under composition, stored as a basis of
/// its vertex supports. The representation kernel (supports that act as the
/// identity) is always part of the span, so two sets are equal as operator
/// sets iff their spans are equal.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    /// One column per generator support.
    generators: Gf2Matrix,
    rank: usize,
    kernel_dim: usize,
}

impl OperatorSet {
    /// Span of `generators` plus `kernel`. `kernel` must be a basis of the
    /// representation kernel.
    pub fn new(num_vertices: usize, generators: Vec<BitVector>, kernel: &[BitVector]) -> Self {
        let mut cols = generators;
        cols.extend(kernel.iter().cloned());
        let generators = Gf2Matrix::from_columns(num_vertices, &cols).expect("supports have vertex length");
        let rank = generators.rank();
        OperatorSet { generators, rank, kernel_dim: kernel.len() }
    }

    pub fn num_vertices(&self) -> usize {
        self.generators.rows()
    }

    pub fn generators(&self) -> &Gf2Matrix {
        &self.generators
    }

    /// Dimension of the support span.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `log2 |O|`, counting operators as maps rather than as supports.
    pub fn log2_operator_count(&self) -> usize {
        self.rank - self.kernel_dim
    }

    pub fn operator_count(&self) -> u128 {
        1u128 << self.log2_operator_count()
    }

    pub fn contains(&self, op: &ProductOperator) -> bool {
        let c =
            Gf2Matrix::from_columns(self.num_vertices(), std::slice::from_ref(op.support())).expect("support length");
        self.generators.span_contains(&c).expect("same vertex count")
    }

    pub fn is_subset_of(&self, other: &OperatorSet) -> bool {
        other.generators.span_contains(&self.generators).expect("same vertex count")
    }

    /// Set equality, decided by mutual span containment.
    pub fn same_as(&self, other: &OperatorSet) -> bool {
        self.rank == other.rank && self.is_subset_of(other)
    }

    /// Reduced row-echelon basis of the span; equal spans give equal output.
    pub fn canonical_basis(&self) -> Vec<BitVector> {
        let rr = self.generators.transpose().rref();
        rr.matrix.row_vectors()[..rr.rank].to_vec()
    }

    /// Every support in the span. Exponential; meant for small checks.
    pub fn supports(&self) -> Vec<BitVector> {
        let basis = self.canonical_basis();
        (0u64..1 << basis.len())
            .map(|mask| {
                let mut w = BitVector::zeros(self.num_vertices());
                for (k, b) in basis.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        w.xor_assign(b);
                    }
                }
                w
            })
            .collect()
    }
}

impl PartialEq for OperatorSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// `{O_1, O_1ᶜ} = {O_2, O_2ᶜ}` as unordered pairs.
pub fn bipartite_sets_equal(o1: &OperatorSet, o1c: &OperatorSet, o2: &OperatorSet, o2c: &OperatorSet) -> bool {
    (o1.same_as(o2) && o1c.same_as(o2c)) || (o1.same_as(o2c) && o1c.same_as(o2))
}

/// First failure found by [`verify_generator_set`]. State and operator
/// fields are positions in the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorViolation {
    LeavesSubspace { op: usize, state: usize },
    NotSelfInverse { op: usize, state: usize },
    NotCommuting { first: usize, second: usize, state: usize },
    NotTransitive { reached: usize, total: usize },
    LocalInvariance { op: usize, qubit: usize, fixed_at: usize, moved_at: usize },
    NotPointwiseDisjoint { state: usize },
    ClosureTooLarge { limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub closed: bool,
    pub self_inverse: bool,
    pub commutative: bool,
    pub transitive: bool,
    pub locally_invariant: bool,
    pub pointwise_disjoint: bool,
    /// Number of distinct maps on the state set generated by the family.
    pub closure_size: usize,
    pub first_violation: Option<GeneratorViolation>,
}

impl GeneratorReport {
    /// Commutativity, transitivity and local invariance, plus mapping the
    /// state set into itself.
    pub fn is_generator_set(&self) -> bool {
        self.closed && self.commutative && self.transitive && self.locally_invariant
    }

    /// Additionally pointwise-disjoint with self-inverse elements.
    pub fn all_hold(&self) -> bool {
        self.is_generator_set() && self.self_inverse && self.pointwise_disjoint
    }
}

/// An operator acting on basis states. Bit vectors act as X-strings (XOR
/// with the mask); closures act as arbitrary maps.
pub trait StateMap {
    fn map(&self, s: &BasisState) -> BasisState;
}

impl StateMap for BitVector {
    fn map(&self, s: &BasisState) -> BasisState {
        BasisState(s.0.xor(self))
    }
}

impl<F: Fn(&BasisState) -> BasisState> StateMap for F {
    fn map(&self, s: &BasisState) -> BasisState {
        self(s)
    }
}

/// Largest composition closure [`verify_generator_set`] will build.
pub const MAX_CLOSURE: usize = 1 << 16;

/// Brute-force check of the generator-set axioms for a family of operators
/// on `states`.
pub fn verify_generator_set<M: StateMap>(states: &Subspace, ops: &[M]) -> GeneratorReport {
    let mut report = GeneratorReport {
        closed: true,
        self_inverse: true,
        commutative: true,
        transitive: true,
        locally_invariant: true,
        pointwise_disjoint: true,
        closure_size: 0,
        first_violation: None,
    };
    let note = |report: &mut GeneratorReport, v: GeneratorViolation| {
        if report.first_violation.is_none() {
            report.first_violation = Some(v);
        }
    };
    let apply = |op: &M, s: &BasisState| op.map(s);

    // Each generator as a permutation of state positions.
    let mut perms: Vec<Vec<u32>> = Vec::with_capacity(ops.len());
    for (k, op) in ops.iter().enumerate() {
        let mut perm = Vec::with_capacity(states.len());
        for (i, s) in states.states().iter().enumerate() {
            match states.position(&apply(op, s)) {
                Some(j) => perm.push(j as u32),
                None => {
                    report.closed = false;
                    note(&mut report, GeneratorViolation::LeavesSubspace { op: k, state: i });
                    break;
                }
            }
        }
        perms.push(perm);
    }
    if !report.closed {
        report.transitive = false;
        report.pointwise_disjoint = false;
        return report;
    }

    for (k, p) in perms.iter().enumerate() {
        if let Some(i) = (0..p.len()).find(|&i| p[p[i] as usize] as usize != i) {
            report.self_inverse = false;
            note(&mut report, GeneratorViolation::NotSelfInverse { op: k, state: i });
        }
    }

    'outer: for a in 0..perms.len() {
        for b in a + 1..perms.len() {
            let (p, q) = (&perms[a], &perms[b]);
            if let Some(i) = (0..p.len()).find(|&i| p[q[i] as usize] != q[p[i] as usize]) {
                report.commutative = false;
                note(&mut report, GeneratorViolation::NotCommuting { first: a, second: b, state: i });
                break 'outer;
            }
        }
    }

    for (k, op) in ops.iter().enumerate() {
        // Invariance on every subsystem is equivalent to invariance on every
        // single qubit, i.e. each qubit is flipped at all states or at none.
        let diffs: Vec<BitVector> = states.states().iter().map(|s| apply(op, s).0.xor(&s.0)).collect();
        if let Some(i) = (1..diffs.len()).find(|&i| diffs[i] != diffs[0]) {
            report.locally_invariant = false;
            let qubit = diffs[i].xor(&diffs[0]).iter_ones().next().expect("differ");
            let (fixed_at, moved_at) = if diffs[0].get(qubit) { (i, 0) } else { (0, i) };
            note(&mut report, GeneratorViolation::LocalInvariance { op: k, qubit: qubit + 1, fixed_at, moved_at });
            break;
        }
    }

    // Composition closure as maps on the state set.
    let identity: Vec<u32> = (0..states.len() as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    let mut closure = Vec::new();
    while let Some(g) = queue.pop_front() {
        for p in &perms {
            let h: Vec<u32> = g.iter().map(|&i| p[i as usize]).collect();
            if seen.insert(h.clone()) {
                if seen.len() > MAX_CLOSURE {
                    report.closure_size = seen.len();
                    report.transitive = false;
                    report.pointwise_disjoint = false;
                    note(&mut report, GeneratorViolation::ClosureTooLarge { limit: MAX_CLOSURE });
                    return report;
                }
                queue.push_back(h);
            }
        }
        closure.push(g);
    }
    report.closure_size = closure.len();

    if !states.is_empty() {
        let orbit: HashSet<u32> = closure.iter().map(|g| g[0]).collect();
        if orbit.len() != states.len() {
            report.transitive = false;
            note(&mut report, GeneratorViolation::NotTransitive { reached: orbit.len(), total: states.len() });
        }
    }

    for i in 0..states.len() {
        let mut images: HashMap<u32, ()> = HashMap::with_capacity(closure.len());
        if closure.iter().any(|g| images.insert(g[i], ()).is_some()) {
            report.pointwise_disjoint = false;
            note(&mut report, GeneratorViolation::NotPointwiseDisjoint { state: i });
            break;
        }
    }
    report
}
