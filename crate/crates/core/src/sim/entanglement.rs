use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::subspace::{partition_labels, Subspace, Subsystem};

/// Eigenvalues of a reduced density matrix, descending. Only the first
/// `values.len()` eigenvalues are stored; the remaining ones up to
/// `2^log2_dimension` are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub log2_dimension: usize,
}

impl Spectrum {
    fn from_unsorted(mut values: Vec<f64>, log2_dimension: usize) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values, log2_dimension }
    }

    /// `−Σ λ ln λ` in nats.
    pub fn entropy(&self) -> Result<f64> {
        entanglement_entropy(&self.values)
    }

    /// Largest absolute eigenvalue difference, zero-padding the shorter one.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        let len = self.values.len().max(other.values.len());
        (0..len)
            .map(|k| {
                let a = self.values.get(k).copied().unwrap_or(0.0);
                let b = other.values.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Eigenvalues above `tol`.
    pub fn support(&self, tol: f64) -> Vec<f64> {
        self.values.iter().copied().filter(|&v| v > tol).collect()
    }
}

/// `−Σ_{λ>0} λ ln λ`. Entries may dip to `-1e-12` (treated as zero); the
/// sum must be within `1e-9` of one.
pub fn entanglement_entropy(values: &[f64]) -> Result<f64> {
    if let Some(v) = values.iter().find(|&&v| !v.is_finite() || v < -1e-12) {
        return Err(Error::MalformedSpectrum(format!("negative or non-finite eigenvalue {v}")));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::MalformedSpectrum(format!("eigenvalues sum to {total}, not 1")));
    }
    Ok(values.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum())
}

fn check_subsystem(psi: &StateVector, a: &Subsystem) -> Result<()> {
    if a.n() != psi.n() {
        return Err(Error::DimensionMismatch { expected: psi.n(), actual: a.n(), context: "subsystem qubit count" });
    }
    if a.is_trivial() {
        return Err(Error::input("subsystem must be neither empty nor everything"));
    }
    Ok(())
}

/// Splits each amplitude index into (index on `a`, index on `aᶜ`), both with
/// the lowest-numbered qubit as most significant bit.
fn split_indices(n: usize, a: &Subsystem) -> Vec<(usize, usize)> {
    let qa = a.qubits();
    let qc = a.complement().qubits();
    let gather = |i: usize, qs: &[usize]| qs.iter().fold(0usize, |acc, &q| acc << 1 | (i >> (n - q) & 1));
    (0..1usize << n).map(|i| (gather(i, &qa), gather(i, &qc))).collect()
}

/// `ψ` as a `2^|A| × 2^|Aᶜ|` matrix.
fn coefficient_matrix(psi: &StateVector, a: &Subsystem) -> DMatrix<Complex64> {
    let n = psi.n();
    let mut m = DMatrix::zeros(1 << a.len(), 1 << (n - a.len()));
    for (i, (ra, rc)) in split_indices(n, a).into_iter().enumerate() {
        m[(ra, rc)] = psi.amplitudes()[i];
    }
    m
}

/// Eigenvalues of a Hermitian matrix, omitting those of exactly-zero rows.
/// The rest is diagonalized per connected block; the complex solver can
/// break down on sparse block structure, so non-finite results are retried
/// through the real symmetric form `[[X, -Y], [Y, X]]`.
fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let mut blocks = UnionFind::<usize>::new(n);
    let mut live = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != zero {
                live[i] = true;
                if i < j {
                    blocks.union(i, j);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in (0..n).filter(|&i| live[i]) {
        let k = *slot.entry(blocks.find(i)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(i);
    }
    let mut values = Vec::new();
    for idx in groups {
        let block = m.select_rows(&idx).select_columns(&idx);
        let eig: Vec<f64> = block.clone().symmetric_eigenvalues().iter().copied().collect();
        if eig.iter().all(|v| v.is_finite()) {
            values.extend(eig);
            continue;
        }
        let k = idx.len();
        let real = DMatrix::from_fn(2 * k, 2 * k, |i, j| {
            let c = block[(i % k, j % k)];
            match (i < k, j < k) {
                (true, true) | (false, false) => c.re,
                (true, false) => -c.im,
                (false, true) => c.im,
            }
        });
        let mut doubled: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
        if doubled.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedSpectrum("eigensolver did not converge".into()));
        }
        doubled.sort_by(|a, b| b.total_cmp(a));
        values.extend(doubled.into_iter().step_by(2));
    }
    Ok(values)
}

/// `ρ_A = tr_{Aᶜ} |ψ⟩⟨ψ|`, indexed with the lowest qubit of `A` most
/// significant.
pub fn reduced_density_matrix(psi: &StateVector, a: &Subsystem) -> Result<DMatrix<Complex64>> {
    check_subsystem(psi, a)?;
    let m = coefficient_matrix(psi, a);
    Ok(&m * m.adjoint())
}

/// Spectrum of `ρ_A`, computed on whichever side of the cut is smaller.
pub fn entanglement_spectrum(psi: &StateVector, a: &Subsystem) -> Result<Spectrum> {
    check_subsystem(psi, a)?;
    let m = coefficient_matrix(psi, a);
    let gram = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
    Ok(Spectrum::from_unsorted(hermitian_eigenvalues(&gram)?, a.len()))
}

/// Spectra of every nontrivial bipartition, indexed by
/// [`Subsystem::bipartition_id`]. Spectra are taken on the canonical side.
pub fn all_bipartition_spectra(psi: &StateVector) -> Result<Vec<Spectrum>> {
    let n = psi.n();
    if n < 2 {
        return Ok(Vec::new());
    }
    let count = (1u64 << (n - 1)) - 1;
    (0..count).into_par_iter().map(|id| entanglement_spectrum(psi, &Subsystem::from_bipartition_id(n, id))).collect()
}

/// Spectrum of `ρ_A` for `Σ_k c_k |r_k⟩` from the `m × m` matrix of class
/// overlaps `d_ij = Σ c_φ c_χ^* ⟨φ_{Aᶜ}|χ_{Aᶜ}⟩` (φ in class `i`, χ in class
/// `j` of `R/~A`). Coefficients are used as given.
pub fn spectrum_via_quotient(coeffs: &[Complex64], r: &Subspace, a: &Subsystem) -> Result<Spectrum> {
    if coeffs.len() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            actual: coeffs.len(),
            context: "one coefficient per subspace state",
        });
    }
    if a.n() != r.n() {
        return Err(Error::DimensionMismatch { expected: r.n(), actual: a.n(), context: "subsystem qubit count" });
    }
    let class = partition_labels(r, a.mask());
    let m = class.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let comp = a.complement();
    let mut groups: HashMap<BitVector, Vec<usize>> = HashMap::new();
    for (k, s) in r.states().iter().enumerate() {
        groups.entry(s.0.and(comp.mask())).or_default().push(k);
    }
    let mut d = DMatrix::<Complex64>::zeros(m, m);
    for members in groups.values() {
        for &p in members {
            for &q in members {
                d[(class[p] as usize, class[q] as usize)] += coeffs[p] * coeffs[q].conj();
            }
        }
    }
    Ok(Spectrum::from_unsorted(hermitian_eigenvalues(&d)?, a.len()))
}

/// `ρ_A` of the mixture `Σ_k p_k |ψ_k⟩⟨ψ_k|`.
pub fn mixed_reduced_density_matrix(mixture: &[(f64, StateVector)], a: &Subsystem) -> Result<DMatrix<Complex64>> {
    let Some((_, first)) = mixture.first() else {
        return Err(Error::input("empty mixture"));
    };
    let total: f64 = mixture.iter().map(|(p, _)| p).sum();
    if mixture.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::input("mixture weights must be nonnegative and sum to 1"));
    }
    let dim = 1 << a.len();
    let mut rho = DMatrix::zeros(dim, dim);
    for (p, psi) in mixture {
        if psi.n() != first.n() {
            return Err(Error::DimensionMismatch {
                expected: first.n(),
                actual: psi.n(),
                context: "mixture qubit count",
            });
        }
        rho += reduced_density_matrix(psi, a)? * Complex64::new(*p, 0.0);
    }
    Ok(rho)
}

pub fn mixed_entanglement_spectrum(mixture: &[(f64, StateVector)], a: &Subsystem) -> Result<Spectrum> {
    let rho = mixed_reduced_density_matrix(mixture, a)?;
    Ok(Spectrum::from_unsorted(hermitian_eigenvalues(&rho)?, a.len()))
}

/// Probability of finding `ψ` outside `span(R)`.
pub fn leakage(psi: &StateVector, r: &Subspace) -> Result<f64> {
    let inside: f64 = psi.coefficients_in(r)?.iter().map(|c| c.norm_sqr()).sum();
    Ok((1.0 - inside).max(0.0))
}

/// Leakage and the renormalized projection of `ψ` onto `span(R)`.
pub fn subspace_leakage(psi: &StateVector, r: &Subspace) -> Result<(f64, StateVector)> {
    let coeffs = psi.coefficients_in(r)?;
    let inside: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if inside <= 1e-300 || 1.0 - inside >= 1.0 - 1e-15 {
        return Err(Error::ProjectionUndefined);
    }
    Ok(((1.0 - inside).max(0.0), StateVector::from_subspace(r, &coeffs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn block_hermitian_eigenvalues() {
        let mut m = DMatrix::zeros(6, 6);
        m[(1, 1)] = c(2.0);
        m[(1, 4)] = Complex64::new(0.0, 1.0);
        m[(4, 1)] = Complex64::new(0.0, -1.0);
        m[(4, 4)] = c(2.0);
        m[(3, 3)] = c(0.5);
        let mut v = hermitian_eigenvalues(&m).unwrap();
        v.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(v.len(), 3);
        for (x, y) in v.iter().zip([3.0, 1.0, 0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sparse_mixed_spectrum_stays_finite() {
        // Rank-4 32x32 matrix on which the complex solver alone returns inf/NaN.
        let r = Subspace::from_strs(&["001000", "001101", "010100", "101000"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8495307375166912048);
        let mixture: Vec<(f64, StateVector)> =
            [0.5, 0.3, 0.2].iter().map(|&p| (p, StateVector::random_in(&r, &mut rng).unwrap())).collect();
        let a = Subsystem::from_qubits(6, &[1, 2, 3, 4, 5]).unwrap();
        let s = mixed_entanglement_spectrum(&mixture, &a).unwrap();
        assert!(s.values.iter().all(|v| v.is_finite()));
        let total: f64 = s.values.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let other = mixed_entanglement_spectrum(&mixture, &Subsystem::from_qubits(6, &[1, 2, 3, 4]).unwrap()).unwrap();
        assert!(s.max_abs_diff(&other) < 1e-12);
    }

    /// Partial trace by explicit sums over bit strings.
    fn naive_rho(psi: &StateVector, a: &Subsystem) -> DMatrix<Complex64> {
        let n = psi.n();
        let qa = a.qubits();
        let dim = 1 << qa.len();
        let mut rho = DMatrix::zeros(dim, dim);
        for i in 0..1usize << n {
            for j in 0..1usize << n {
                let agree_outside =
                    (1..=n).filter(|q| !a.contains(*q)).all(|q| (i >> (n - q) & 1) == (j >> (n - q) & 1));
                if !agree_outside {
                    continue;
                }
                let ia = qa.iter().fold(0, |acc, &q| acc << 1 | (i >> (n - q) & 1));
                let ja = qa.iter().fold(0, |acc, &q| acc << 1 | (j >> (n - q) & 1));
                rho[(ia, ja)] += psi.amplitudes()[i] * psi.amplitudes()[j].conj();
            }
        }
        rho
    }

    #[test]
    fn bell_state() {
        let s = 0.5f64.sqrt();
        let psi = StateVector::new(2, vec![c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let a = Subsystem::from_qubits(2, &[1]).unwrap();
        let rho = reduced_density_matrix(&psi, &a).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15 && rho[(0, 1)].norm() < 1e-15);
        let spec = entanglement_spectrum(&psi, &a).unwrap();
        assert!((spec.entropy().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn product_state_is_pure() {
        let psi = StateVector::basis(3, 0b101).unwrap();
        let a = Subsystem::from_qubits(3, &[2]).unwrap();
        let spec = entanglement_spectrum(&psi, &a).unwrap();
        assert!((spec.values[0] - 1.0).abs() < 1e-14);
        assert!(spec.entropy().unwrap().abs() < 1e-12);
        assert!(reduced_density_matrix(&psi, &Subsystem::empty(3)).is_err());
    }

    #[test]
    fn dense_matches_naive_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = Subspace::full(4).unwrap();
        for _ in 0..5 {
            let psi = StateVector::random_in(&r, &mut rng).unwrap();
            for mask in [0b0001u64, 0b0110, 0b1011] {
                let a = Subsystem::from_u64(4, mask);
                let diff = reduced_density_matrix(&psi, &a).unwrap() - naive_rho(&psi, &a);
                assert!(diff.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn quotient_spectrum_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = Subspace::from_strs(&["000", "100", "111"]).unwrap();
        for _ in 0..10 {
            let psi = StateVector::random_in(&r, &mut rng).unwrap();
            let coeffs = psi.coefficients_in(&r).unwrap();
            for mask in 1u64..7 {
                let a = Subsystem::from_u64(3, mask);
                let q = spectrum_via_quotient(&coeffs, &r, &a).unwrap();
                let d = entanglement_spectrum(&psi, &a).unwrap();
                assert!(q.max_abs_diff(&d) < 1e-12);
            }
        }
    }

    #[test]
    fn single_state_quotient() {
        let r = Subspace::from_strs(&["0110"]).unwrap();
        let q = spectrum_via_quotient(&[c(1.0)], &r, &Subsystem::from_qubits(4, &[1, 3]).unwrap()).unwrap();
        assert_eq!(q.values, vec![1.0]);
        assert_eq!(q.log2_dimension, 2);
    }

    #[test]
    fn entropy_validation() {
        assert_eq!(entanglement_entropy(&[1.0]).unwrap(), 0.0);
        assert!((entanglement_entropy(&[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((entanglement_entropy(&[1.0 + 5e-13, -5e-13]).unwrap()).abs() < 1e-11);
        assert!(entanglement_entropy(&[0.5, 0.4]).is_err());
        assert!(entanglement_entropy(&[1.1, -0.1]).is_err());
        assert!(entanglement_entropy(&[f64::NAN]).is_err());
    }

    #[test]
    fn leakage_inside_and_outside() {
        let r = Subspace::from_strs(&["00", "11"]).unwrap();
        let inside = StateVector::from_subspace(&r, &[c(1.0), c(1.0)]).unwrap();
        let (l, p) = subspace_leakage(&inside, &r).unwrap();
        assert!(l.abs() < 1e-15);
        assert!((p.inner(&inside).unwrap().norm() - 1.0).abs() < 1e-14);
        let outside = StateVector::basis(2, 1).unwrap();
        assert_eq!(leakage(&outside, &r).unwrap(), 1.0);
        assert_eq!(subspace_leakage(&outside, &r).unwrap_err(), Error::ProjectionUndefined);
        let half = StateVector::uniform(2).unwrap();
        let (l, p) = subspace_leakage(&half, &r).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        assert!((p.probability(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complement_spectra_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random_in(&Subspace::full(5).unwrap(), &mut rng).unwrap();
        for id in 0..15u64 {
            let a = Subsystem::from_bipartition_id(5, id);
            let x = entanglement_spectrum(&psi, &a).unwrap();
            let y = entanglement_spectrum(&psi, &a.complement()).unwrap();
            assert!(x.max_abs_diff(&y) < 1e-12);
        }
        assert_eq!(all_bipartition_spectra(&psi).unwrap().len(), 15);
    }

    #[test]
    fn mixed_spectrum_of_single_state_equals_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = StateVector::random_in(&Subspace::full(3).unwrap(), &mut rng).unwrap();
        let a = Subsystem::from_qubits(3, &[2]).unwrap();
        let m = mixed_entanglement_spectrum(&[(1.0, psi.clone())], &a).unwrap();
        assert!(m.max_abs_diff(&entanglement_spectrum(&psi, &a).unwrap()) < 1e-13);
        assert!(mixed_entanglement_spectrum(&[(0.5, psi)], &a).is_err());
    }
}
