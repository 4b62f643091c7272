use num_complex::Complex64;

use super::hamiltonian::{build_hamiltonian, AnnealSpec, Integrator};
use super::state::StateVector;
use crate::error::{Error, Result};

/// Largest accepted `|‖ψ(t)‖ - 1|` over a run.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-8;

/// Evolves `initial` under `spec` and returns the state at each of
/// `sample_times` (ascending, inside `[0, t_final]`).
pub fn evolve(spec: &AnnealSpec, initial: &StateVector, sample_times: &[f64]) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(sample_times.len());
    evolve_with(spec, initial, sample_times, |_, psi| {
        out.push(psi.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Like [`evolve`], but hands each snapshot to `visit` instead of storing it.
pub fn evolve_with<F>(spec: &AnnealSpec, initial: &StateVector, sample_times: &[f64], mut visit: F) -> Result<()>
where
    F: FnMut(f64, &StateVector) -> Result<()>,
{
    spec.validate()?;
    if initial.n() != spec.problem.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.problem.n(),
            actual: initial.n(),
            context: "initial state qubit count",
        });
    }
    let tf = spec.t_final();
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::input("sample times must be ascending"));
    }
    if let Some(&t) = sample_times.iter().find(|&&t| !(0.0..=tf).contains(&t)) {
        return Err(Error::input(format!("sample time {t} outside [0, {tf}]")));
    }

    let diagonal = spec.problem.diagonal();
    let dt = spec.step();
    let mut stepper = Stepper::new(spec, &diagonal);
    let mut psi = initial.clone();
    let mut t = 0.0;
    for &target in sample_times {
        let span = target - t;
        if span > 0.0 {
            // Land exactly on the sample time with steps no longer than dt.
            let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for k in 0..steps {
                stepper.step(psi.amplitudes_mut(), t + k as f64 * h, h)?;
            }
            t = target;
        }
        let drift = (psi.norm() - 1.0).abs();
        if drift > NORM_DRIFT_TOLERANCE {
            return Err(Error::Integration { drift, tolerance: NORM_DRIFT_TOLERANCE, time: t, suggested_dt: dt / 2.0 });
        }
        visit(t, &psi)?;
    }
    Ok(())
}

struct Stepper<'a> {
    spec: &'a AnnealSpec,
    diagonal: &'a [f64],
    scratch: [Vec<Complex64>; 5],
}

const I: Complex64 = Complex64::new(0.0, 1.0);

impl<'a> Stepper<'a> {
    fn new(spec: &'a AnnealSpec, diagonal: &'a [f64]) -> Self {
        let zero = || vec![Complex64::new(0.0, 0.0); diagonal.len()];
        Stepper { spec, diagonal, scratch: [zero(), zero(), zero(), zero(), zero()] }
    }

    fn step(&mut self, psi: &mut [Complex64], t: f64, h: f64) -> Result<()> {
        match self.spec.integrator {
            Integrator::Yoshida4 => {
                let cbrt2 = 2f64.cbrt();
                let w1 = 1.0 / (2.0 - cbrt2);
                let w0 = -cbrt2 / (2.0 - cbrt2);
                self.split(psi, t + 0.5 * w1 * h, w1 * h);
                self.split(psi, t + (w1 + 0.5 * w0) * h, w0 * h);
                self.split(psi, t + (1.5 * w1 + w0) * h, w1 * h);
                Ok(())
            }
            Integrator::Rk4 => self.rk4(psi, t, h),
        }
    }

    /// Symmetric split step of length `h` with coefficients frozen at `tm`.
    fn split(&self, psi: &mut [Complex64], tm: f64, h: f64) {
        let (g, s) = self.spec.schedule.coefficients(tm);
        self.diagonal_phase(psi, 0.5 * h * s);
        let (sn, c) = (h * g).sin_cos();
        let n = psi.len().trailing_zeros();
        for b in 0..n {
            let bit = 1usize << b;
            for i in 0..psi.len() {
                if i & bit == 0 {
                    let (a0, a1) = (psi[i], psi[i | bit]);
                    psi[i] = a0 * c + I * sn * a1;
                    psi[i | bit] = a1 * c + I * sn * a0;
                }
            }
        }
        self.diagonal_phase(psi, 0.5 * h * s);
    }

    fn diagonal_phase(&self, psi: &mut [Complex64], tau: f64) {
        for (a, &d) in psi.iter_mut().zip(self.diagonal) {
            let (sn, c) = (tau * d).sin_cos();
            *a *= Complex64::new(c, -sn);
        }
    }

    fn rk4(&mut self, psi: &mut [Complex64], t: f64, h: f64) -> Result<()> {
        let tf = self.spec.t_final();
        let at = |t: f64| build_hamiltonian(self.spec, self.diagonal, t.min(tf));
        let [k1, k2, k3, k4, tmp] = &mut self.scratch;
        let deriv = |h_op: &super::hamiltonian::HamiltonianAt, x: &[Complex64], out: &mut [Complex64]| {
            h_op.apply_into(x, out);
            for o in out.iter_mut() {
                *o *= -I;
            }
        };
        deriv(&at(t)?, psi, k1);
        for ((x, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k1.iter()) {
            *x = p + k * (0.5 * h);
        }
        deriv(&at(t + 0.5 * h)?, tmp, k2);
        for ((x, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k2.iter()) {
            *x = p + k * (0.5 * h);
        }
        deriv(&at(t + 0.5 * h)?, tmp, k3);
        for ((x, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k3.iter()) {
            *x = p + k * h;
        }
        deriv(&at(t + h)?, tmp, k4);
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        Ok(())
    }
}
