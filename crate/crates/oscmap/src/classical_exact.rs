//! The exact classical image of the quantum problem: oscillators whose
//! positions *and* momenta are coupled with equal strength.
//!
//! Hamilton's equations for these oscillators read `q̇ = H p`, `ṗ = -H q`,
//! so `z = (q + ip)/√2` obeys `i ż = H z` — the same equation as the
//! quantum amplitudes. Everything in this module is plumbing around that
//! fact: building the second-order form `q̈ = -H² q`, integrating the
//! first-order pair, reconstructing momenta from velocities, and assembling
//! complex amplitudes that can be compared against the quantum trajectory
//! one-to-one.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrators::{self, ComplexTrajectory, IntegrationPlan, SecondOrderSystem};
use crate::linalg::{self, SpectralDecomposition};
use crate::models::Hamiltonian;
use crate::quantum::ComplexAmplitudeVector;

/// Real positions and momenta of the oscillator set.
#[derive(Debug, Clone)]
pub struct PhaseSpaceState {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhaseSpaceState {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        if q.iter().chain(&p).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { q, p })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }
}

/// Samples of a phase-space trajectory on a snapped time grid.
#[derive(Debug, Clone)]
pub struct PhaseSpaceTrajectory {
    times: Vec<f64>,
    states: Vec<PhaseSpaceState>,
}

impl PhaseSpaceTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &PhaseSpaceState {
        &self.states[i]
    }

    /// Assemble the complex amplitudes of every sample.
    pub fn amplitudes(&self) -> ComplexTrajectory {
        let states = self
            .states
            .iter()
            .map(|s| assemble_amplitudes(s).values().to_vec())
            .collect();
        ComplexTrajectory::new(self.times.clone(), states)
    }
}

/// The second-order form of the exact oscillators, `q̈ = -H² q`: stiffness
/// is the explicit matrix square, damping is zero. For rings this is where
/// the next-nearest-neighbour entries `V²` show up even though `H` itself
/// couples nearest neighbours only.
pub fn build_pq_system(h: &Hamiltonian) -> Result<SecondOrderSystem> {
    let stiffness = linalg::mat_square(h.matrix());
    SecondOrderSystem::undamped(stiffness, h.omegas().to_vec())
}

/// Human-readable per-site equations of [`build_pq_system`], emitted as a
/// diagnostic for small systems (N ≤ 4).
pub fn pq_expansion(h: &Hamiltonian) -> Option<String> {
    let n = h.dim();
    if n > 4 {
        return None;
    }
    let s = linalg::mat_square(h.matrix());
    let mut out = String::new();
    for i in 0..n {
        let mut line = format!("ddot(q{i}) + {}*q{i} =", s.get(i, i));
        let mut any = false;
        for j in 0..n {
            if j == i || s.get(i, j) == 0.0 {
                continue;
            }
            let sign = if any { " + " } else { " " };
            line.push_str(&format!("{sign}(-{})*q{j}", s.get(i, j)));
            any = true;
        }
        if !any {
            line.push_str(" 0");
        }
        out.push_str(&line);
        out.push('\n');
    }
    Some(out)
}

/// Initial oscillator state equivalent to the quantum amplitudes:
/// `q_n = √2 Re c_n`, `p_n = √2 Im c_n`.
pub fn quantum_to_phase_space(c: &ComplexAmplitudeVector) -> PhaseSpaceState {
    let root2 = std::f64::consts::SQRT_2;
    let q = c.values().iter().map(|z| root2 * z.re).collect();
    let p = c.values().iter().map(|z| root2 * z.im).collect();
    PhaseSpaceState { q, p }
}

/// Complex amplitudes from a phase-space state: `z_n = (q_n + i p_n)/√2`.
pub fn assemble_amplitudes(s: &PhaseSpaceState) -> ComplexAmplitudeVector {
    let root2 = std::f64::consts::SQRT_2;
    let values =
        s.q.iter()
            .zip(&s.p)
            .map(|(&q, &p)| Complex64::new(q / root2, p / root2))
            .collect();
    ComplexAmplitudeVector::new(values).expect("finite phase-space state")
}

/// Integrate Hamilton's equations `q̇ = H p`, `ṗ = -H q` directly with RK4
/// on the 2N-dimensional real system.
pub fn integrate_hamilton(
    h: &Hamiltonian,
    s0: &PhaseSpaceState,
    plan: &IntegrationPlan,
) -> Result<PhaseSpaceTrajectory> {
    let n = h.dim();
    if s0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s0.dim(),
        });
    }
    let mut y0 = s0.q.clone();
    y0.extend_from_slice(&s0.p);
    let matrix = h.matrix();
    let (times, states) = integrators::rk4_real_trajectory(
        |y, out| {
            let (q, p) = y.split_at(n);
            let (dq, dp) = out.split_at_mut(n);
            matrix.matvec_into(p, dq);
            matrix.matvec_into(q, dp);
            for x in dp.iter_mut() {
                *x = -*x;
            }
        },
        &y0,
        plan,
    );
    let states = states
        .into_iter()
        .map(|y| PhaseSpaceState {
            q: y[..n].to_vec(),
            p: y[n..].to_vec(),
        })
        .collect();
    Ok(PhaseSpaceTrajectory { times, states })
}

/// Recover momenta from velocities by solving `H p = q̇`. Fails on a
/// singular Hamiltonian (e.g. a dimer with ω = |V|), where the momenta are
/// not determined by the velocities.
pub fn reconstruct_momenta(h: &Hamiltonian, qdot: &[f64]) -> Result<Vec<f64>> {
    linalg::solve_sym(h.matrix(), qdot)
}

/// The normal-mode form of the solution: frequencies Ω_k (equal to the
/// Hamiltonian eigenvalues), the shared eigenvectors, and one complex
/// coefficient per mode fixed by the initial state.
#[derive(Debug, Clone)]
pub struct NormalModeSolution {
    basis: SpectralDecomposition,
    coefficients: Vec<Complex64>,
}

impl NormalModeSolution {
    /// Mode angular frequencies Ω_k.
    pub fn frequencies(&self) -> &[f64] {
        self.basis.eigenvalues()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn basis(&self) -> &SpectralDecomposition {
        &self.basis
    }

    /// Real oscillation amplitude β_k and phase α_k of mode k, defined by
    /// `A_k = (β_k/√2) e^{iα_k}` so the modal position is
    /// `q_k(t) = β_k cos(Ω_k t + α_k)`.
    pub fn amplitude_phase(&self, k: usize) -> (f64, f64) {
        let a = self.coefficients[k];
        (std::f64::consts::SQRT_2 * a.norm(), a.arg())
    }

    /// Amplitudes at time t: `z_n(t) = Σ_k B_kn A_k e^{-iΩ_k t}`.
    pub fn evaluate(&self, t: f64) -> Vec<Complex64> {
        let n = self.basis.dim();
        let mut z = vec![Complex64::ZERO; n];
        for k in 0..n {
            let amp = self.coefficients[k] * Complex64::new(0.0, -self.frequencies()[k] * t).exp();
            let b = self.basis.eigenvector(k);
            for (zn, bn) in z.iter_mut().zip(b) {
                *zn += amp * *bn;
            }
        }
        z
    }
}

/// Decompose an initial state into normal modes: `A_k = Σ_n B_kn c_n(0)`.
pub fn normal_mode_solution(
    h: &Hamiltonian,
    c0: &ComplexAmplitudeVector,
) -> Result<NormalModeSolution> {
    if h.dim() != c0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: c0.dim(),
        });
    }
    let basis = h.spectrum()?;
    let coefficients = basis.mode_coefficients_complex(c0.values());
    Ok(NormalModeSolution {
        basis,
        coefficients,
    })
}

/// The full pipeline: map the quantum state to phase space, integrate
/// Hamilton's equations, and assemble `z_n(t)`. Up to integrator error the
/// result equals the quantum trajectory of the same Hamiltonian.
pub fn exact_classical_evolve(
    h: &Hamiltonian,
    c0: &ComplexAmplitudeVector,
    plan: &IntegrationPlan,
) -> Result<ComplexTrajectory> {
    let s0 = quantum_to_phase_space(c0);
    let traj = integrate_hamilton(h, &s0, plan)?;
    Ok(traj.amplitudes())
}
