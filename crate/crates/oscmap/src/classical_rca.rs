//! Position-coupled oscillators: the simpler classical systems that agree
//! with the quantum dynamics when every coupling is small against the
//! natural frequencies (the realistic-coupling approximation, RCA).
//!
//! Two variants are built from the same Hamiltonian. The bare form couples
//! sites off-diagonally and keeps the diagonal at ω_n²; its linearized
//! eigenproblem is the quantum one by construction. The spring form adds
//! the coupling back-action to the diagonal, which is what physical pendula
//! or capacitively coupled circuits actually do; its spectrum sits a little
//! above the quantum one, which shows up as an overall phase drift that
//! [`phase_compensate`] removes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrators::{ComplexTrajectory, SecondOrderSystem, SecondOrderTrajectory};
use crate::linalg::{self, RealSymmetricMatrix, SpectralDecomposition};
use crate::models::Hamiltonian;
use crate::quantum::ComplexAmplitudeVector;

/// Coupling-to-frequency ratio beyond which the approximation is flagged as
/// degrading in validity reports.
pub const RCA_DEGRADING_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcaVariant {
    /// Off-diagonal coupling only; diagonal stays at ω_n².
    Bare,
    /// Spring form with the coupling back-action on the diagonal.
    Spring,
}

/// A position-coupled oscillator system derived from a Hamiltonian, with
/// the classical couplings fixed as `K_nm = 2 ω̄ V_nm`.
#[derive(Debug, Clone)]
pub struct RcaSystem {
    system: SecondOrderSystem,
    omega_bar: f64,
    variant: RcaVariant,
    source: Hamiltonian,
}

impl RcaSystem {
    pub fn system(&self) -> &SecondOrderSystem {
        &self.system
    }

    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }

    pub fn variant(&self) -> RcaVariant {
        self.variant
    }

    pub fn source(&self) -> &Hamiltonian {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// Classical coupling K_nm = 2 ω̄ V_nm (zero on the diagonal).
    pub fn coupling(&self, n: usize, m: usize) -> f64 {
        2.0 * self.omega_bar * self.source.coupling(n, m)
    }

    /// Initial positions and velocities equivalent to the quantum state
    /// under the per-site amplitude rule: `q = √2 Re c`, `q̇ = ω̄ √2 Im c`.
    pub fn initial_state(&self, c0: &ComplexAmplitudeVector) -> Result<(Vec<f64>, Vec<f64>)> {
        if c0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: c0.dim(),
            });
        }
        let root2 = std::f64::consts::SQRT_2;
        let q = c0.values().iter().map(|z| root2 * z.re).collect();
        let v = c0
            .values()
            .iter()
            .map(|z| self.omega_bar * root2 * z.im)
            .collect();
        Ok((q, v))
    }
}

fn build(h: &Hamiltonian, variant: RcaVariant) -> Result<RcaSystem> {
    let n = h.dim();
    let omega_bar = h.omega_bar();
    let stiffness = match variant {
        RcaVariant::Bare => RealSymmetricMatrix::from_fn(n, |i, j| {
            if i == j {
                h.omega(i) * h.omega(i)
            } else {
                2.0 * omega_bar * h.coupling(i, j)
            }
        }),
        RcaVariant::Spring => RealSymmetricMatrix::from_fn(n, |i, j| {
            if i == j {
                let back_action: f64 = (0..n)
                    .filter(|&m| m != i)
                    .map(|m| 2.0 * omega_bar * h.coupling(i, m))
                    .sum();
                h.omega(i) * h.omega(i) + back_action
            } else {
                -2.0 * omega_bar * h.coupling(i, j)
            }
        }),
    };
    let system = SecondOrderSystem::undamped(stiffness, h.omegas().to_vec())?;
    Ok(RcaSystem {
        system,
        omega_bar,
        variant,
        source: h.clone(),
    })
}

/// The bare position-coupled system `q̈_n + ω_n² q_n = -Σ_m K_nm q_m`.
pub fn build_q_coupled(h: &Hamiltonian) -> Result<RcaSystem> {
    build(h, RcaVariant::Bare)
}

/// The spring form `q̈_n + ω_n² q_n + (Σ_m K_nm) q_n = Σ_m K_nm q_m`, the
/// variant a physical set of spring-coupled pendula realizes. For the dimer
/// its eigenfrequencies are ω and √(ω² + 2K).
pub fn build_q_coupled_spring(h: &Hamiltonian) -> Result<RcaSystem> {
    build(h, RcaVariant::Spring)
}

/// The narrow-band linearization of the system's eigenproblem: solves
/// `(Ω_k − ν_n) C_kn = Σ_m S_nm/(2ω̄) C_km` with ν_n = √(S_nn), i.e. the
/// eigenproblem of the frequency-like matrix `diag(ν) + S_off/(2ω̄)`.
///
/// For the bare variant that matrix is the source Hamiltonian itself, so
/// the quantum spectrum comes back identically; for the spring variant it
/// exposes the overall frequency shift the diagonal back-action causes.
pub fn rca_effective_spectrum(sys: &RcaSystem) -> Result<SpectralDecomposition> {
    let s = sys.system().stiffness();
    let n = s.dim();
    for i in 0..n {
        if s.get(i, i) < 0.0 {
            return Err(Error::NonPositiveDiagonal {
                index: i,
                value: s.get(i, i),
            });
        }
    }
    let two_omega = 2.0 * sys.omega_bar();
    let m = RealSymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            s.get(i, i).sqrt()
        } else {
            s.get(i, j) / two_omega
        }
    });
    linalg::eig_sym(&m)
}

/// Per-site amplitude rule `z_n = (q_n + i q̇_n/ω̄)/√2`.
///
/// Within the approximation's validity range every mode frequency is close
/// to ω̄, so dividing all velocities by the mean frequency is accurate to
/// the same order as the approximation itself. For an eigenmode-pure
/// trajectory [`rca_amplitudes_modal`] divides by the exact mode frequency
/// instead.
pub fn rca_amplitudes(sys: &RcaSystem, q: &[f64], qdot: &[f64]) -> Result<ComplexAmplitudeVector> {
    if q.len() != sys.dim() || qdot.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: q.len().max(qdot.len()),
        });
    }
    let root2 = std::f64::consts::SQRT_2;
    let wbar = sys.omega_bar();
    let values = q
        .iter()
        .zip(qdot)
        .map(|(&q, &qd)| Complex64::new(q / root2, qd / (wbar * root2)))
        .collect();
    ComplexAmplitudeVector::new(values)
}

/// Per-mode amplitude rule: expand (q, q̇) in the stiffness eigenbasis,
/// divide each modal velocity by its own Ω_k, and transform back. Exact for
/// single-mode trajectories; needs a positive-definite stiffness.
pub fn rca_amplitudes_modal(
    sys: &RcaSystem,
    q: &[f64],
    qdot: &[f64],
) -> Result<ComplexAmplitudeVector> {
    let dec = linalg::eig_sym(sys.system().stiffness())?;
    modal_amplitudes(&dec, q, qdot)
}

fn modal_amplitudes(
    dec: &SpectralDecomposition,
    q: &[f64],
    qdot: &[f64],
) -> Result<ComplexAmplitudeVector> {
    let n = dec.dim();
    if q.len() != n || qdot.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: q.len().max(qdot.len()),
        });
    }
    let root2 = std::f64::consts::SQRT_2;
    let a = dec.mode_coefficients(q);
    let adot = dec.mode_coefficients(qdot);
    let mut z = vec![Complex64::ZERO; n];
    for k in 0..n {
        let lambda = dec.eigenvalues()[k];
        if lambda <= 0.0 {
            return Err(Error::Singular);
        }
        let omega_k = lambda.sqrt();
        let zeta = Complex64::new(a[k] / root2, adot[k] / (omega_k * root2));
        let b = dec.eigenvector(k);
        for (zn, bn) in z.iter_mut().zip(b) {
            *zn += zeta * *bn;
        }
    }
    ComplexAmplitudeVector::new(z)
}

/// Apply the per-site rule along a whole trajectory.
pub fn rca_trajectory_amplitudes(
    sys: &RcaSystem,
    traj: &SecondOrderTrajectory,
) -> Result<ComplexTrajectory> {
    let mut states = Vec::with_capacity(traj.len());
    for i in 0..traj.len() {
        states.push(
            rca_amplitudes(sys, traj.position(i), traj.velocity(i))?
                .values()
                .to_vec(),
        );
    }
    Ok(ComplexTrajectory::new(traj.times().to_vec(), states))
}

/// Apply the per-mode rule along a whole trajectory (one eigendecomposition
/// for all samples).
pub fn rca_trajectory_amplitudes_modal(
    sys: &RcaSystem,
    traj: &SecondOrderTrajectory,
) -> Result<ComplexTrajectory> {
    let dec = linalg::eig_sym(sys.system().stiffness())?;
    let mut states = Vec::with_capacity(traj.len());
    for i in 0..traj.len() {
        states.push(
            modal_amplitudes(&dec, traj.position(i), traj.velocity(i))?
                .values()
                .to_vec(),
        );
    }
    Ok(ComplexTrajectory::new(traj.times().to_vec(), states))
}

/// Multiply every sample by `e^{i Δω t}`, removing a uniform spectral shift
/// between two descriptions. Populations and coherences are untouched by
/// construction.
pub fn phase_compensate(traj: &ComplexTrajectory, delta_omega: f64) -> ComplexTrajectory {
    let states = traj
        .iter()
        .map(|(t, state)| {
            let phase = Complex64::new(0.0, delta_omega * t).exp();
            state.iter().map(|z| z * phase).collect()
        })
        .collect();
    ComplexTrajectory::new(traj.times().to_vec(), states)
}

/// Uniform shift between the spring-variant effective spectrum and the
/// quantum one: mean of √(S_nn) minus the mean site frequency. Zero for the
/// bare variant; `K/(2ω)` for the spring dimer. This is the `Δω` that
/// [`phase_compensate`] needs to line the spring trajectory up with the
/// quantum one.
pub fn spectral_shift(sys: &RcaSystem) -> f64 {
    let s = sys.system().stiffness();
    let n = s.dim();
    let mean_nu = (0..n).map(|i| s.get(i, i).max(0.0).sqrt()).sum::<f64>() / n as f64;
    mean_nu - sys.omega_bar()
}

/// Add velocity damping `2Γ_n q̇_n` to the system.
pub fn build_damped(sys: &RcaSystem, gamma: &[f64]) -> Result<SecondOrderSystem> {
    if gamma.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: gamma.len(),
        });
    }
    let damping = gamma.iter().map(|g| 2.0 * g).collect();
    SecondOrderSystem::new(
        sys.system().stiffness().clone(),
        damping,
        sys.system().natural_frequencies().to_vec(),
    )
}

/// How far a Hamiltonian sits inside the approximation's validity range.
#[derive(Debug, Clone, Copy)]
pub struct RcaValidityReport {
    /// max |V_nm| / ω̄ — the basic smallness parameter.
    pub coupling_ratio: f64,
    /// ‖V‖/(2ω̄) with the spectral norm of the coupling block: the relative
    /// size of the second-order coupling term the approximation drops.
    pub second_order_ratio: f64,
    /// ω̄ / max |V_nm|: how fast the counter-rotating phases spin compared
    /// to the coupling timescale (infinite when uncoupled).
    pub non_rotating_scale: f64,
    /// Set when `coupling_ratio` reaches [`RCA_DEGRADING_THRESHOLD`].
    pub degrading: bool,
}

pub fn rca_validity_ratio(h: &Hamiltonian) -> Result<RcaValidityReport> {
    let omega_bar = h.omega_bar();
    let max_v = h.max_coupling();
    let coupling_dec = linalg::eig_sym(&h.coupling_matrix())?;
    let spectral_norm = coupling_dec
        .eigenvalues()
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let coupling_ratio = max_v / omega_bar;
    Ok(RcaValidityReport {
        coupling_ratio,
        second_order_ratio: spectral_norm / (2.0 * omega_bar),
        non_rotating_scale: if max_v > 0.0 {
            omega_bar / max_v
        } else {
            f64::INFINITY
        },
        degrading: coupling_ratio >= RCA_DEGRADING_THRESHOLD,
    })
}
