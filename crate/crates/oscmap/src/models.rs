//! Hamiltonian construction and the stock model systems: the two-site dimer,
//! the nearest-neighbour ring, the tuned pendulum pair and the
//! capacitively coupled LC circuit pair.
//!
//! Units are ħ = 1 throughout, so every matrix entry is an angular
//! frequency: the diagonal holds the site frequencies ω_n, the off-diagonal
//! the couplings V_nm. The classical constructions need ω_n > 0, which is
//! enforced here once so the rest of the crate can rely on it.

use crate::error::{Error, Result};
use crate::integrators::SecondOrderSystem;
use crate::linalg::{self, RealSymmetricMatrix, SpectralDecomposition};

/// Relative asymmetry tolerated by [`Hamiltonian::from_dense`] before input
/// is rejected rather than symmetrized.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A validated N-level Hamiltonian: real, symmetric, finite, with a strictly
/// positive diagonal.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: RealSymmetricMatrix,
    omegas: Vec<f64>,
}

impl Hamiltonian {
    /// Wrap an already symmetric matrix, checking the diagonal.
    pub fn from_matrix(matrix: RealSymmetricMatrix) -> Result<Self> {
        let n = matrix.dim();
        let mut omegas = Vec::with_capacity(n);
        for i in 0..n {
            let w = matrix.get(i, i);
            if !(w > 0.0) {
                return Err(Error::NonPositiveDiagonal { index: i, value: w });
            }
            omegas.push(w);
        }
        Ok(Self { matrix, omegas })
    }

    /// Build from raw rows. Asymmetry up to [`SYMMETRY_TOLERANCE`] (relative
    /// to the largest entry) is averaged away; anything larger is rejected.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare);
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (rows[i][j] - rows[j][i]).abs();
                if diff > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::Asymmetric { i, j, diff });
                }
            }
        }
        let matrix = RealSymmetricMatrix::from_fn(n, |i, j| {
            if i == j {
                rows[i][i]
            } else {
                0.5 * (rows[i][j] + rows[j][i])
            }
        });
        Self::from_matrix(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &RealSymmetricMatrix {
        &self.matrix
    }

    /// Site frequency ω_n (the diagonal).
    pub fn omega(&self, n: usize) -> f64 {
        self.omegas[n]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// Arithmetic mean of the site frequencies.
    pub fn omega_bar(&self) -> f64 {
        self.omegas.iter().sum::<f64>() / self.omegas.len() as f64
    }

    /// Coupling V_nm; zero on the diagonal by definition.
    pub fn coupling(&self, n: usize, m: usize) -> f64 {
        if n == m {
            0.0
        } else {
            self.matrix.get(n, m)
        }
    }

    /// Largest coupling magnitude, the scale that controls how well the
    /// position-coupled approximation works.
    pub fn max_coupling(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max(self.matrix.get(i, j).abs());
            }
        }
        worst
    }

    /// The coupling block alone: off-diagonal entries of the matrix, zero
    /// diagonal.
    pub fn coupling_matrix(&self) -> RealSymmetricMatrix {
        RealSymmetricMatrix::from_fn(
            self.dim(),
            |i, j| if i == j { 0.0 } else { self.matrix.get(i, j) },
        )
    }

    pub fn spectrum(&self) -> Result<SpectralDecomposition> {
        linalg::eig_sym(&self.matrix)
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::NonPositiveParameter { name, value });
    }
    Ok(())
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonPositiveParameter { name, value });
    }
    Ok(())
}

/// Two identical sites with transition frequency `epsilon` coupled by `v`:
/// `[[ε, V], [V, ε]]`. Weak coupling `|v| < ε` is required so the classical
/// construction stays meaningful.
pub fn build_dimer(epsilon: f64, v: f64) -> Result<Hamiltonian> {
    require_positive("epsilon", epsilon)?;
    require_finite("v", v)?;
    if v.abs() >= epsilon {
        return Err(Error::CouplingTooStrong {
            coupling: v,
            limit: epsilon,
        });
    }
    Hamiltonian::from_matrix(RealSymmetricMatrix::from_fn(2, |i, j| {
        if i == j {
            epsilon
        } else {
            v
        }
    }))
}

/// N identical sites on a ring with nearest-neighbour coupling `v`:
/// circulant with ε on the diagonal and V on the two cyclic off-diagonals.
/// Needs `n >= 3` so the two neighbours of a site are distinct; a two-site
/// ring would count its single bond twice, use [`build_dimer`] instead.
pub fn build_ring(n: usize, epsilon: f64, v: f64) -> Result<Hamiltonian> {
    if n < 3 {
        return Err(Error::RingTooSmall { n });
    }
    require_positive("epsilon", epsilon)?;
    require_finite("v", v)?;
    Hamiltonian::from_matrix(RealSymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            epsilon
        } else if (j - i) == 1 || (j - i) == n - 1 {
            // from_fn only visits i <= j, so j - i is the ring distance
            v
        } else {
            0.0
        }
    }))
}

/// A pair of identical pendula, spring-coupled with strength `k`
/// (frequency² units), whose lengths are tuned from natural frequency
/// `omega` down to `omega_s` so that the pair reproduces the two-level
/// quantum dynamics exactly.
#[derive(Debug, Clone, Copy)]
pub struct PendulumPair {
    pub omega: f64,
    pub coupling: f64,
    pub omega_s: f64,
}

impl PendulumPair {
    /// The spring-form oscillator system of the tuned pair:
    /// `φ̈_n + ω_s² φ_n + K φ_n = K φ_other`. Its eigenfrequencies are
    /// exactly `ω ∓ K/(2ω)`.
    pub fn spring_system(&self) -> Result<SecondOrderSystem> {
        let k = self.coupling;
        let diag = self.omega_s * self.omega_s + k;
        let stiffness = RealSymmetricMatrix::from_fn(2, |i, j| if i == j { diag } else { -k });
        SecondOrderSystem::undamped(stiffness, vec![self.omega_s; 2])
    }
}

/// Tune a pendulum pair so that spring coupling `k` maps onto the quantum
/// dimer with transition frequency `omega` and coupling `V = K/(2ω)`.
///
/// The shifted frequency satisfies `ω_s² = ω² − K + K²/(4ω²)`, which is a
/// perfect square: `ω_s = ω − K/(2ω)` exactly.
pub fn pendulum_params_for_dimer(omega: f64, k: f64) -> Result<PendulumPair> {
    require_positive("omega", omega)?;
    require_finite("k", k)?;
    if k >= omega * omega {
        return Err(Error::CouplingTooStrong {
            coupling: k,
            limit: omega * omega,
        });
    }
    let omega_s = omega - k / (2.0 * omega);
    Ok(PendulumPair {
        omega,
        coupling: k,
        omega_s,
    })
}

/// Two identical LC oscillators joined by a coupling capacitor.
#[derive(Debug, Clone, Copy)]
pub struct LcCircuitPair {
    pub inductance: f64,
    pub capacitance: f64,
    pub coupling_capacitance: f64,
}

impl LcCircuitPair {
    pub fn new(inductance: f64, capacitance: f64, coupling_capacitance: f64) -> Result<Self> {
        require_positive("inductance", inductance)?;
        require_positive("capacitance", capacitance)?;
        if !(coupling_capacitance >= 0.0) || !coupling_capacitance.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "coupling_capacitance",
                value: coupling_capacitance,
            });
        }
        Ok(Self {
            inductance,
            capacitance,
            coupling_capacitance,
        })
    }
}

/// Oscillator-language view of an LC pair.
#[derive(Debug, Clone, Copy)]
pub struct LcMapping {
    /// Single-circuit frequency √(1/LC).
    pub omega: f64,
    /// Dimensionless coupling ratio K = C_K / C.
    pub k_ratio: f64,
    /// Equivalent quantum coupling V = Kω/2.
    pub v_equiv: f64,
    /// Exact in-phase eigenfrequency (the coupling capacitor idles).
    pub omega_plus: f64,
    /// Exact out-of-phase eigenfrequency ω/√(1+2K).
    pub omega_minus: f64,
}

impl LcMapping {
    /// The coupled-mode splitting predicted in the weak-coupling limit,
    /// where Ω₋ ≈ ω − Kω.
    pub fn omega_minus_weak_coupling(&self) -> f64 {
        self.omega - self.k_ratio * self.omega
    }

    /// Quantum dimer equivalent to this circuit pair in the weak-coupling
    /// regime.
    pub fn equivalent_dimer(&self) -> Result<Hamiltonian> {
        build_dimer(self.omega, self.v_equiv)
    }
}

pub fn lc_to_oscillator(pair: &LcCircuitPair) -> LcMapping {
    let omega = (1.0 / (pair.inductance * pair.capacitance)).sqrt();
    let k_ratio = pair.coupling_capacitance / pair.capacitance;
    LcMapping {
        omega,
        k_ratio,
        v_equiv: 0.5 * k_ratio * omega,
        omega_plus: omega,
        omega_minus: omega / (1.0 + 2.0 * k_ratio).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn from_dense_accepts_weak_dimer() {
        let h = Hamiltonian::from_dense(&[vec![1.0, 0.005], vec![0.005, 1.0]]).unwrap();
        assert_eq!(h.omega(0), 1.0);
        assert_eq!(h.coupling(0, 1), 0.005);
        assert_eq!(h.coupling(0, 0), 0.0);
    }

    #[test]
    fn from_dense_rejects_asymmetry() {
        let err = Hamiltonian::from_dense(&[vec![1.0, 0.2], vec![0.1, 1.0]]);
        assert!(matches!(err, Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn from_dense_rejects_zero_diagonal() {
        let err = Hamiltonian::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        match err {
            Err(Error::NonPositiveDiagonal { index: 0, .. }) => {}
            other => panic!("expected diagonal rejection, got {other:?}"),
        }
        // The message has to tell the user why the diagonal matters.
        let msg = Error::NonPositiveDiagonal {
            index: 0,
            value: 0.0,
        }
        .to_string();
        assert!(msg.contains("positive natural frequencies"));
    }

    #[test]
    fn from_dense_symmetrizes_roundoff() {
        let eps = 1e-15;
        let h = Hamiltonian::from_dense(&[vec![1.0, 0.1 + eps], vec![0.1, 1.0]]).unwrap();
        assert_eq!(h.matrix().get(0, 1), h.matrix().get(1, 0));
    }

    #[test]
    fn dimer_matrix_and_spectrum() {
        let h = build_dimer(1.0, 0.005).unwrap();
        assert_eq!(h.matrix().get(0, 0), 1.0);
        assert_eq!(h.matrix().get(0, 1), 0.005);

        let uncoupled = build_dimer(1.0, 0.0).unwrap();
        let dec = uncoupled.spectrum().unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0, 1.0]);

        let split = build_dimer(1.0, 0.05).unwrap().spectrum().unwrap();
        assert!((split.eigenvalues()[0] - 0.95).abs() < 1e-14);
        assert!((split.eigenvalues()[1] - 1.05).abs() < 1e-14);
    }

    #[test]
    fn dimer_rejects_strong_coupling() {
        assert!(matches!(
            build_dimer(1.0, 1.0),
            Err(Error::CouplingTooStrong { .. })
        ));
        assert!(matches!(
            build_dimer(1.0, -1.2),
            Err(Error::CouplingTooStrong { .. })
        ));
        assert!(matches!(
            build_dimer(0.0, 0.1),
            Err(Error::NonPositiveParameter { .. })
        ));
    }

    #[test]
    fn dimer_sign_flip_swaps_spectrum() {
        let plus = build_dimer(1.0, 0.05).unwrap().spectrum().unwrap();
        let minus = build_dimer(1.0, -0.05).unwrap().spectrum().unwrap();
        // Same multiset either way.
        for (a, b) in plus.eigenvalues().iter().zip(minus.eigenvalues()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn ring_dispersion() {
        let dec = build_ring(4, 1.0, 0.1).unwrap().spectrum().unwrap();
        for (got, want) in dec.eigenvalues().iter().zip([0.8, 1.0, 1.0, 1.2]) {
            assert!((got - want).abs() < 1e-12);
        }

        let flat = build_ring(3, 1.0, 0.0).unwrap().spectrum().unwrap();
        assert_eq!(flat.eigenvalues(), &[1.0, 1.0, 1.0]);

        // N = 6 against the dispersion relation ε + 2V cos(2πj/N).
        let (eps, v) = (1.0, 0.05);
        let dec = build_ring(6, eps, v).unwrap().spectrum().unwrap();
        let mut want: Vec<f64> = (0..6)
            .map(|j| eps + 2.0 * v * (2.0 * PI * j as f64 / 6.0).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in dec.eigenvalues().iter().zip(&want) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn ring_rejects_small_n() {
        assert!(matches!(
            build_ring(2, 1.0, 0.1),
            Err(Error::RingTooSmall { n: 2 })
        ));
    }

    #[test]
    fn ring_spectrum_invariant_under_relabeling() {
        let n = 6;
        let h = build_ring(n, 1.0, 0.07).unwrap();
        let base = h.spectrum().unwrap().eigenvalues().to_vec();
        for shift in 1..n {
            let rotated = RealSymmetricMatrix::from_fn(n, |i, j| {
                h.matrix().get((i + shift) % n, (j + shift) % n)
            });
            let eigs = linalg::eig_sym(&rotated).unwrap();
            for (a, b) in base.iter().zip(eigs.eigenvalues()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn pendulum_tuning() {
        let p = pendulum_params_for_dimer(1.0, 0.01).unwrap();
        assert!((p.omega_s - 0.995).abs() < 1e-15);
        assert!((p.omega_s * p.omega_s - 0.990025).abs() < 1e-12);

        let free = pendulum_params_for_dimer(1.0, 0.0).unwrap();
        assert_eq!(free.omega_s, 1.0);

        let p = pendulum_params_for_dimer(2.0, 0.1).unwrap();
        let want = (4.0_f64 - 0.1 + 0.01 / 16.0).sqrt();
        assert!((p.omega_s - want).abs() < 1e-13);

        assert!(matches!(
            pendulum_params_for_dimer(1.0, 1.0),
            Err(Error::CouplingTooStrong { .. })
        ));
    }

    #[test]
    fn pendulum_shifted_square_identity() {
        for (omega, k) in [(1.0, 0.01), (2.0, 0.1), (0.9, 0.3)] {
            let p = pendulum_params_for_dimer(omega, k).unwrap();
            let want = omega * omega - k + k * k / (4.0 * omega * omega);
            let got = p.omega_s * p.omega_s;
            assert!((got - want).abs() <= 1e-12 * want.abs());
        }
    }

    #[test]
    fn tuned_pendula_reproduce_quantum_eigenfrequencies() {
        let (omega, k) = (1.0, 0.01);
        let p = pendulum_params_for_dimer(omega, k).unwrap();
        let sys = p.spring_system().unwrap();
        let freqs = sys.mode_frequencies().unwrap();
        let v = k / (2.0 * omega);
        assert!((freqs[0] - (omega - v)).abs() <= 1e-12);
        assert!((freqs[1] - (omega + v)).abs() <= 1e-12);
    }

    #[test]
    fn lc_mapping() {
        let uncoupled = lc_to_oscillator(&LcCircuitPair::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(uncoupled.k_ratio, 0.0);
        assert_eq!(uncoupled.omega_plus, uncoupled.omega_minus);

        let m = lc_to_oscillator(&LcCircuitPair::new(1.0, 1.0, 0.02).unwrap());
        assert_eq!(m.omega, 1.0);
        assert_eq!(m.k_ratio, 0.02);
        assert!((m.omega_minus - 1.0 / 1.04f64.sqrt()).abs() < 1e-15);

        // Weak-coupling estimate has a ~1.5e-4 gap against the exact mode
        // frequency at K = 0.01.
        let m = lc_to_oscillator(&LcCircuitPair::new(1.0, 1.0, 0.01).unwrap());
        let gap = (m.omega_minus - m.omega_minus_weak_coupling()).abs();
        let expected = 1.0 / 1.02f64.sqrt() - 0.99;
        assert!((gap - expected).abs() < 1e-12);
        assert!(gap < 2.0 * m.k_ratio * m.k_ratio * m.omega);

        assert!(LcCircuitPair::new(0.0, 1.0, 0.1).is_err());
        assert!(LcCircuitPair::new(1.0, 1.0, -0.1).is_err());
    }
}
