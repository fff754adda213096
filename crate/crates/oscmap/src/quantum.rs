//! Propagation of the quantum amplitudes c_n(t): spectrally (exact up to
//! the eigensolver), by fixed-step integration, and with phenomenological
//! level widths.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrators::{self, ComplexTrajectory, IntegrationPlan};
use crate::models::Hamiltonian;

/// Tolerance on |‖c‖² − 1| accepted by [`ComplexAmplitudeVector::normalized`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// A vector of complex probability amplitudes.
#[derive(Debug, Clone)]
pub struct ComplexAmplitudeVector {
    values: Vec<Complex64>,
}

impl ComplexAmplitudeVector {
    /// Wrap amplitudes without any normalization requirement (reconstructed
    /// classical amplitudes and decaying states live here too).
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    /// Wrap amplitudes that are supposed to describe a closed-system state;
    /// rejects vectors whose norm² strays from 1 by more than
    /// [`NORMALIZATION_TOLERANCE`].
    pub fn normalized(values: Vec<Complex64>) -> Result<Self> {
        let v = Self::new(values)?;
        let norm_sq = v.norm_sq();
        if (norm_sq - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(v)
    }

    /// The basis state with all amplitude on one site.
    pub fn site_basis(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::IndexOutOfRange {
                index: site,
                len: dim,
            });
        }
        let mut values = vec![Complex64::ZERO; dim];
        values[site] = Complex64::ONE;
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Per-level widths γ_n entering the equations as complex site energies
/// ε_n − iγ_n.
#[derive(Debug, Clone)]
pub struct LevelWidths {
    gamma: Vec<f64>,
}

impl LevelWidths {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        for (index, &value) in gamma.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativeDamping { index, value });
            }
        }
        Ok(Self { gamma })
    }

    pub fn uniform(dim: usize, gamma: f64) -> Result<Self> {
        Self::new(vec![gamma; dim])
    }

    pub fn values(&self) -> &[f64] {
        &self.gamma
    }
}

fn check_dim(h: &Hamiltonian, c0: &ComplexAmplitudeVector) -> Result<()> {
    if h.dim() != c0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: c0.dim(),
        });
    }
    Ok(())
}

/// Exact propagation through the spectral decomposition:
/// `c_n(t) = Σ_k A_k B_kn e^{-i E_k t}` with `A_k = Σ_n B_kn c_n(0)`.
///
/// Valid at arbitrary times; the only error source is the eigensolver, so
/// the norm is preserved to ~1e-14 per sample.
pub fn propagate_spectral(
    h: &Hamiltonian,
    c0: &ComplexAmplitudeVector,
    times: &[f64],
) -> Result<ComplexTrajectory> {
    check_dim(h, c0)?;
    let n = h.dim();
    let dec = h.spectrum()?;
    let coeffs = dec.mode_coefficients_complex(c0.values());

    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let mut state = vec![Complex64::ZERO; n];
        for k in 0..n {
            let phase = Complex64::new(0.0, -dec.eigenvalues()[k] * t).exp();
            let amp = coeffs[k] * phase;
            let b = dec.eigenvector(k);
            for (s, bn) in state.iter_mut().zip(b) {
                *s += amp * *bn;
            }
        }
        states.push(state);
    }
    Ok(ComplexTrajectory::new(times.to_vec(), states))
}

/// Numerical propagation of `i ċ = H c` by fixed-step RK4.
pub fn propagate_ode(
    h: &Hamiltonian,
    c0: &ComplexAmplitudeVector,
    plan: &IntegrationPlan,
) -> Result<ComplexTrajectory> {
    check_dim(h, c0)?;
    integrators::rk4_linear_complex(h.matrix(), c0.values(), plan)
}

/// Propagation with level widths: `i ċ_n = (ε_n − iγ_n) c_n + Σ_m V_nm c_m`,
/// integrated as an ODE on the complex-diagonal system. The norm is
/// non-increasing; for uniform widths it decays as e^{-γt} exactly.
pub fn propagate_damped(
    h: &Hamiltonian,
    widths: &LevelWidths,
    c0: &ComplexAmplitudeVector,
    plan: &IntegrationPlan,
) -> Result<ComplexTrajectory> {
    check_dim(h, c0)?;
    if widths.values().len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: widths.values().len(),
        });
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let gamma = widths.values();
    let matrix = h.matrix();
    Ok(integrators::rk4_complex_trajectory(
        |c, out| {
            matrix.matvec_complex_into(c, out);
            for i in 0..out.len() {
                out[i] = minus_i * out[i] - gamma[i] * c[i];
            }
        },
        c0.values(),
        plan,
    ))
}

/// Closed-form dimer amplitudes for the excitation starting fully on site
/// 0: `c_0 = e^{-iεt} cos(Vt)`, `c_1 = -i e^{-iεt} sin(Vt)`.
pub fn dimer_closed_form(epsilon: f64, v: f64, times: &[f64]) -> ComplexTrajectory {
    let states = times
        .iter()
        .map(|&t| {
            let phase = Complex64::new(0.0, -epsilon * t).exp();
            vec![
                phase * (v * t).cos(),
                phase * Complex64::new(0.0, -1.0) * (v * t).sin(),
            ]
        })
        .collect();
    ComplexTrajectory::new(times.to_vec(), states)
}

/// Closed-form transfer on the N-site ring starting from site 0:
/// `c_m(t) = (1/N) e^{-iεt} Σ_j e^{i k_j m} e^{-i 2V cos(k_j) t}` with
/// `k_j = 2πj/N`.
pub fn ring_transfer(n: usize, epsilon: f64, v: f64, times: &[f64]) -> Result<ComplexTrajectory> {
    if n < 3 {
        return Err(Error::RingTooSmall { n });
    }
    let ks: Vec<f64> = (0..n)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64)
        .collect();
    let states = times
        .iter()
        .map(|&t| {
            let global = Complex64::new(0.0, -epsilon * t).exp() / n as f64;
            (0..n)
                .map(|m| {
                    let mut acc = Complex64::ZERO;
                    for &k in &ks {
                        let arg = k * m as f64 - 2.0 * v * k.cos() * t;
                        acc += Complex64::new(0.0, arg).exp();
                    }
                    global * acc
                })
                .collect()
        })
        .collect();
    Ok(ComplexTrajectory::new(times.to_vec(), states))
}
