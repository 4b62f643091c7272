use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Largest qubit count for dense state vectors.
pub const MAX_STATE_QUBITS: usize = 26;

/// Tolerance on `‖ψ‖ = 1` for constructed states.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A normalized pure state on `n` qubits. Amplitude index `i` is the bit
/// string with qubit 1 as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_STATE_QUBITS {
        return Err(Error::Resource { what: "qubit count", value: n, limit: MAX_STATE_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// Rejects vectors of the wrong length or off unit norm by more than
    /// [`NORM_TOLERANCE`].
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, actual: amps.len(), context: "amplitude count" });
        }
        let s = StateVector { n, amps };
        let drift = (s.norm() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(Error::input(format!("state norm deviates from 1 by {drift:.3e}")));
        }
        Ok(s)
    }

    /// Scales `amps` to unit norm.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::input("cannot normalize the zero vector"));
        }
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::new(n, amps)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        if index >= 1 << n {
            return Err(Error::input(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Equal superposition of all `2^n` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let a = Complex64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
        Ok(StateVector { n, amps: vec![a; 1 << n] })
    }

    /// `Σ_k c_k |r_k⟩` for the states `r_k` of `r`, normalized.
    pub fn from_subspace(r: &Subspace, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != r.len() {
            return Err(Error::DimensionMismatch {
                expected: r.len(),
                actual: coeffs.len(),
                context: "one coefficient per subspace state",
            });
        }
        check_qubits(r.n())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << r.n()];
        for (s, &c) in r.states().iter().zip(coeffs) {
            amps[s.amplitude_index()] = c;
        }
        StateVector::normalized(r.n(), amps)
    }

    /// Uniform superposition over the states of `r`.
    pub fn uniform_over(r: &Subspace) -> Result<Self> {
        StateVector::from_subspace(r, &vec![Complex64::new(1.0, 0.0); r.len()])
    }

    /// Random normalized coefficients over `r` with Gaussian-like real and
    /// imaginary parts.
    pub fn random_in<R: Rng + ?Sized>(r: &Subspace, rng: &mut R) -> Result<Self> {
        StateVector::from_subspace(r, &random_coefficients(r.len(), rng))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
                context: "qubit count for inner product",
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Coefficients `⟨r_k|ψ⟩` in the order of `r`.
    pub fn coefficients_in(&self, r: &Subspace) -> Result<Vec<Complex64>> {
        if r.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: r.n(), context: "subspace qubit count" });
        }
        Ok(r.states().iter().map(|s| self.amps[s.amplitude_index()]).collect())
    }
}

/// Coefficients drawn as sums of uniforms (a cheap approximate Gaussian) so
/// that random states are spread over the sphere rather than a cube corner.
pub fn random_coefficients<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex64> {
    let mut draw = || (0..4).map(|_| rng.random::<f64>() - 0.5).sum::<f64>();
    (0..len).map(|_| Complex64::new(draw(), draw())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(StateVector::new(1, amps.clone()).is_err());
        let s = StateVector::normalized(1, amps).unwrap();
        assert!((s.probability(0) - 0.5).abs() < 1e-15);
        assert!(StateVector::new(2, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn subspace_embedding_uses_msb_first() {
        let r = Subspace::from_strs(&["10", "01"]).unwrap();
        let s = StateVector::from_subspace(&r, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(s.probability(2), 1.0);
        let c = s.coefficients_in(&r).unwrap();
        assert_eq!(c[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn uniform_is_normalized() {
        let s = StateVector::uniform(5).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }
}
