use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{StateVector, MAX_STATE_QUBITS};
use crate::error::{Error, Result};

/// A multi-body constraint term on 1-based physical qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub qubits: Vec<usize>,
    pub strength: f64,
}

/// Which side of a constraint is energetically favored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintSign {
    /// States with an even number of zeros on the constraint's qubits (the
    /// parity condition) get energy `-C`, others `+C`.
    #[default]
    Favored,
    /// The opposite assignment, for sensitivity checks.
    Flipped,
}

/// `H_p = Σ_m J̃_m z_m + constraint terms`, diagonal in the computational
/// basis. `z_m = +1` when qubit `m` is 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemHamiltonian {
    pub fields: Vec<f64>,
    pub constraints: Vec<Constraint>,
    #[serde(default)]
    pub sign: ConstraintSign,
}

impl ProblemHamiltonian {
    pub fn new(fields: Vec<f64>, constraints: Vec<Constraint>) -> Result<Self> {
        let h = ProblemHamiltonian { fields, constraints, sign: ConstraintSign::Favored };
        h.validate()?;
        Ok(h)
    }

    pub fn with_sign(mut self, sign: ConstraintSign) -> Self {
        self.sign = sign;
        self
    }

    /// Replaces every constraint strength by `c`.
    pub fn with_penalty(mut self, c: f64) -> Self {
        for k in &mut self.constraints {
            k.strength = c;
        }
        self
    }

    pub fn n(&self) -> usize {
        self.fields.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n > MAX_STATE_QUBITS {
            return Err(Error::Resource { what: "qubit count", value: n, limit: MAX_STATE_QUBITS });
        }
        if self.fields.iter().any(|f| !f.is_finite()) {
            return Err(Error::input("non-finite field"));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.qubits.is_empty() {
                return Err(Error::input(format!("constraint {} has no qubits", k + 1)));
            }
            if let Some(&q) = c.qubits.iter().find(|&&q| q == 0 || q > n) {
                return Err(Error::input(format!("constraint {} uses qubit {q} outside 1..={n}", k + 1)));
            }
            let mut sorted = c.qubits.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != c.qubits.len() {
                return Err(Error::input(format!("constraint {} repeats a qubit", k + 1)));
            }
            if !(c.strength.is_finite() && c.strength >= 0.0) {
                return Err(Error::input(format!("constraint {} strength must be finite and >= 0", k + 1)));
            }
        }
        Ok(())
    }

    /// Amplitude-index mask of 1-based qubit `q` (qubit 1 is the MSB).
    fn bit(&self, q: usize) -> usize {
        1 << (self.n() - q)
    }

    pub fn field_energy(&self, index: usize) -> f64 {
        (1..=self.n())
            .map(|q| {
                let z = if index & self.bit(q) == 0 { 1.0 } else { -1.0 };
                self.fields[q - 1] * z
            })
            .sum()
    }

    pub fn constraint_energy(&self, index: usize) -> f64 {
        let sign = match self.sign {
            ConstraintSign::Favored => 1.0,
            ConstraintSign::Flipped => -1.0,
        };
        self.constraints
            .iter()
            .map(|c| {
                let zeros = c.qubits.iter().filter(|&&q| index & self.bit(q) == 0).count();
                if zeros % 2 == 0 {
                    -sign * c.strength
                } else {
                    sign * c.strength
                }
            })
            .sum()
    }

    /// Whether basis state `index` satisfies every constraint's parity
    /// condition.
    pub fn satisfies_constraints(&self, index: usize) -> bool {
        self.constraints.iter().all(|c| c.qubits.iter().filter(|&&q| index & self.bit(q) == 0).count() % 2 == 0)
    }

    /// The `2^n` diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n()).map(|i| self.field_energy(i) + self.constraint_energy(i)).collect()
    }
}

/// Interpolation `H(t) = g(t) H_0 + s(t) H_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `s(t) = t / t_final`, `g = 1 - s`.
    Linear { t_final: f64 },
    /// Constant `s` for `t` in `[0, t_final]`.
    Frozen { s: f64, t_final: f64 },
}

impl Schedule {
    pub fn t_final(&self) -> f64 {
        match *self {
            Schedule::Linear { t_final } | Schedule::Frozen { t_final, .. } => t_final,
        }
    }

    /// `(g(t), s(t))`.
    pub fn coefficients(&self, t: f64) -> (f64, f64) {
        let s = match *self {
            Schedule::Linear { t_final } => t / t_final,
            Schedule::Frozen { s, .. } => s,
        };
        (1.0 - s, s)
    }

    pub fn validate(&self) -> Result<()> {
        let tf = self.t_final();
        if !(tf.is_finite() && tf > 0.0) {
            return Err(Error::input(format!("t_final must be positive, got {tf}")));
        }
        if let Schedule::Frozen { s, .. } = *self {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::input(format!("frozen s must lie in [0, 1], got {s}")));
            }
        }
        Ok(())
    }
}

/// `H(t)` at a fixed time: diagonal problem part and the transverse driver
/// `H_0 = -Σ_m x_m`, applied without forming a matrix.
#[derive(Clone, Debug)]
pub struct HamiltonianAt<'a> {
    pub diagonal: &'a [f64],
    pub g: f64,
    pub s: f64,
}

impl HamiltonianAt<'_> {
    pub fn n(&self) -> usize {
        self.diagonal.len().trailing_zeros() as usize
    }

    /// `out = H ψ`.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let n = self.n();
        for (i, o) in out.iter_mut().enumerate() {
            let mut x = Complex64::new(0.0, 0.0);
            for b in 0..n {
                x += psi[i ^ (1 << b)];
            }
            *o = psi[i] * (self.s * self.diagonal[i]) - x * self.g;
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
        self.apply_into(psi.amplitudes(), &mut out);
        out
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let h = self.apply(psi);
        psi.amplitudes().iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

/// The problem, schedule and step size of one anneal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSpec {
    pub problem: ProblemHamiltonian,
    pub schedule: Schedule,
    /// Defaults to `t_final / 1e5`.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub integrator: Integrator,
}

/// Fixed-step fourth-order integrators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Triple-jump composition of the symmetric split step
    /// `e^{-i h s H_p / 2} e^{-i h g H_0} e^{-i h s H_p / 2}`. Unitary up to
    /// rounding.
    #[default]
    Yoshida4,
    /// Classical Runge-Kutta on the Schrödinger equation.
    Rk4,
}

/// Default number of steps over `[0, t_final]`.
pub const DEFAULT_STEPS: f64 = 1e5;

impl AnnealSpec {
    pub fn new(problem: ProblemHamiltonian, schedule: Schedule) -> Self {
        AnnealSpec { problem, schedule, dt: None, integrator: Integrator::default() }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn t_final(&self) -> f64 {
        self.schedule.t_final()
    }

    pub fn step(&self) -> f64 {
        self.dt.unwrap_or(self.t_final() / DEFAULT_STEPS)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        self.schedule.validate()?;
        let dt = self.step();
        if !(dt.is_finite() && dt > 0.0 && dt <= self.t_final()) {
            return Err(Error::input(format!("dt must lie in (0, t_final], got {dt}")));
        }
        Ok(())
    }
}

/// `H(t)` over a precomputed problem diagonal.
pub fn build_hamiltonian<'a>(spec: &AnnealSpec, diagonal: &'a [f64], t: f64) -> Result<HamiltonianAt<'a>> {
    let tf = spec.t_final();
    if !(0.0..=tf).contains(&t) {
        return Err(Error::input(format!("time {t} outside [0, {tf}]")));
    }
    if diagonal.len() != 1 << spec.problem.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << spec.problem.n(),
            actual: diagonal.len(),
            context: "problem diagonal length",
        });
    }
    let (g, s) = spec.schedule.coefficients(t);
    Ok(HamiltonianAt { diagonal, g, s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_field() {
        let h = ProblemHamiltonian::new(vec![1.0], vec![]).unwrap();
        assert_eq!(h.diagonal(), vec![1.0, -1.0]);
    }

    #[test]
    fn constraint_parity_by_zero_count() {
        let c = |q: Vec<usize>| Constraint { qubits: q, strength: 2.0 };
        let h = ProblemHamiltonian::new(vec![0.0; 3], vec![c(vec![1, 2, 3])]).unwrap();
        assert_eq!(h.constraint_energy(0b100), -2.0);
        assert_eq!(h.constraint_energy(0b111), -2.0);
        assert_eq!(h.constraint_energy(0b110), 2.0);
        assert_eq!(h.constraint_energy(0b000), 2.0);
        let h4 = ProblemHamiltonian::new(vec![0.0; 4], vec![c(vec![1, 2, 3, 4])]).unwrap();
        assert_eq!(h4.constraint_energy(0b0000), -2.0);
        assert_eq!(h4.constraint_energy(0b0001), 2.0);
        let flipped = h4.with_sign(ConstraintSign::Flipped);
        assert_eq!(flipped.constraint_energy(0b0000), 2.0);
    }

    #[test]
    fn rejects_bad_constraints() {
        let c = Constraint { qubits: vec![1, 4], strength: 1.0 };
        assert!(ProblemHamiltonian::new(vec![0.0; 3], vec![c]).is_err());
        let c = Constraint { qubits: vec![1, 1], strength: 1.0 };
        assert!(ProblemHamiltonian::new(vec![0.0; 3], vec![c]).is_err());
        let c = Constraint { qubits: vec![1, 2], strength: -1.0 };
        assert!(ProblemHamiltonian::new(vec![0.0; 3], vec![c]).is_err());
    }

    #[test]
    fn driver_ground_state_is_uniform() {
        let p = ProblemHamiltonian::new(vec![0.3, -0.2, 0.1], vec![]).unwrap();
        let spec = AnnealSpec::new(p.clone(), Schedule::Linear { t_final: 1.0 });
        let d = p.diagonal();
        let h = build_hamiltonian(&spec, &d, 0.0).unwrap();
        let u = StateVector::uniform(3).unwrap();
        let hu = h.apply(&u);
        for (a, b) in hu.iter().zip(u.amplitudes()) {
            assert!((a - b * -3.0).norm() < 1e-14);
        }
        assert!(build_hamiltonian(&spec, &d, 1.5).is_err());
    }
}
