//! Observables and trajectory comparison metrics: populations, coherences,
//! energies, and the deviation report used to quantify how well two
//! propagation methods agree.

use num_complex::Complex64;

use crate::classical_exact::PhaseSpaceState;
use crate::error::{Error, Result};
use crate::integrators::ComplexTrajectory;
use crate::models::Hamiltonian;

/// Site populations |z_n|².
pub fn populations(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|z| z.norm_sqr()).collect()
}

/// Off-diagonal density-matrix element z_i* z_j. Invariant under a global
/// phase of the state.
pub fn coherence(z: &[Complex64], i: usize, j: usize) -> Result<Complex64> {
    let len = z.len();
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    if j >= len {
        return Err(Error::IndexOutOfRange { index: j, len });
    }
    Ok(z[i].conj() * z[j])
}

/// The oscillator Hamiltonian ½ Σ_nm H_nm (q_n q_m + p_n p_m). Equal to the
/// quantum energy expectation of the assembled amplitudes, and conserved
/// along the exact classical flow.
pub fn classical_energy(h: &Hamiltonian, s: &PhaseSpaceState) -> Result<f64> {
    if s.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: s.dim(),
        });
    }
    Ok(0.5 * (h.matrix().quadratic_form(s.q()) + h.matrix().quadratic_form(s.p())))
}

/// Quantum energy expectation ⟨z|H|z⟩ (real for symmetric H).
pub fn expectation_energy(h: &Hamiltonian, z: &[Complex64]) -> Result<f64> {
    if z.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: z.len(),
        });
    }
    let hz = h.matrix().matvec_complex(z);
    Ok(z.iter().zip(&hz).map(|(a, b)| (a.conj() * b).re).sum())
}

/// What [`compare`] should do beyond the plain metrics.
#[derive(Debug, Clone, Default)]
pub struct CompareOptions {
    /// Multiply trajectory `b` by `e^{iΔωt}` before the amplitude-level
    /// metric. Populations and coherences are always computed on the raw
    /// data, where a uniform shift cancels anyway.
    pub phase_delta: Option<f64>,
    /// Site pairs whose coherences are compared; defaults to (0, 1) for
    /// systems with at least two sites.
    pub coherence_pairs: Vec<(usize, usize)>,
}

/// Deviation metrics between two trajectories on the same snapped grid.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub max_abs_amplitude_diff: f64,
    pub max_population_diff: f64,
    pub rms_population_diff: f64,
    pub max_coherence_diff: f64,
    pub phase_compensated: bool,
    pub time_window: (f64, f64),
}

impl ComparisonReport {
    /// Flat `key: value` block, one metric per line.
    pub fn to_key_value_block(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "max_abs_amplitude_diff: {:.16e}\n",
            self.max_abs_amplitude_diff
        ));
        out.push_str(&format!(
            "max_population_diff: {:.16e}\n",
            self.max_population_diff
        ));
        out.push_str(&format!(
            "rms_population_diff: {:.16e}\n",
            self.rms_population_diff
        ));
        out.push_str(&format!(
            "max_coherence_diff: {:.16e}\n",
            self.max_coherence_diff
        ));
        out.push_str(&format!("phase_compensated: {}\n", self.phase_compensated));
        out.push_str(&format!(
            "time_window: {:.16e} {:.16e}\n",
            self.time_window.0, self.time_window.1
        ));
        out
    }
}

/// Compare two trajectories sample by sample. The grids must be identical —
/// both sides are expected to come from the same snapped plan, so no
/// interpolation is ever applied.
pub fn compare(
    a: &ComplexTrajectory,
    b: &ComplexTrajectory,
    options: &CompareOptions,
) -> Result<ComparisonReport> {
    if a.len() != b.len() || a.dim() != b.dim() {
        return Err(Error::GridMismatch);
    }
    if a.times().iter().zip(b.times()).any(|(x, y)| x != y) {
        return Err(Error::GridMismatch);
    }
    if a.is_empty() {
        return Err(Error::GridMismatch);
    }
    let dim = a.dim();
    let pairs: Vec<(usize, usize)> = if options.coherence_pairs.is_empty() {
        if dim >= 2 {
            vec![(0, 1)]
        } else {
            vec![]
        }
    } else {
        for &(i, j) in &options.coherence_pairs {
            if i >= dim || j >= dim {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    len: dim,
                });
            }
        }
        options.coherence_pairs.clone()
    };

    let mut max_amp = 0.0f64;
    let mut max_pop = 0.0f64;
    let mut sum_sq_pop = 0.0f64;
    let mut pop_count = 0usize;
    let mut max_coh = 0.0f64;

    for i in 0..a.len() {
        let t = a.times()[i];
        let sa = a.state(i);
        let sb = b.state(i);

        let phase = options
            .phase_delta
            .map(|dw| Complex64::new(0.0, dw * t).exp())
            .unwrap_or(Complex64::ONE);
        for n in 0..dim {
            max_amp = max_amp.max((sa[n] - phase * sb[n]).norm());
            let dpop = sa[n].norm_sqr() - sb[n].norm_sqr();
            max_pop = max_pop.max(dpop.abs());
            sum_sq_pop += dpop * dpop;
            pop_count += 1;
        }
        for &(pi, pj) in &pairs {
            let ca = sa[pi].conj() * sa[pj];
            let cb = sb[pi].conj() * sb[pj];
            max_coh = max_coh.max((ca - cb).norm());
        }
    }

    Ok(ComparisonReport {
        max_abs_amplitude_diff: max_amp,
        max_population_diff: max_pop,
        rms_population_diff: (sum_sq_pop / pop_count as f64).sqrt(),
        max_coherence_diff: max_coh,
        phase_compensated: options.phase_delta.is_some(),
        time_window: (a.times()[0], *a.times().last().unwrap()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_exact::{assemble_amplitudes, integrate_hamilton, quantum_to_phase_space};
    use crate::integrators::IntegrationPlan;
    use crate::models::{build_dimer, Hamiltonian};
    use crate::quantum::{propagate_spectral, ComplexAmplitudeVector};
    use std::f64::consts::PI;

    #[test]
    fn population_basics() {
        let z = [Complex64::ONE, Complex64::ZERO];
        assert_eq!(populations(&z), vec![1.0, 0.0]);

        let z = [Complex64::new(0.3, 0.4), Complex64::new(0.0, -0.2)];
        let pops = populations(&z);
        let total: f64 = pops.iter().sum();
        let norm: f64 = z.iter().map(|z| z.norm_sqr()).sum();
        assert!((total - norm).abs() <= 1e-15);
    }

    #[test]
    fn dimer_equal_populations_at_quarter_beat() {
        let (eps, v) = (1.0, 0.005);
        let h = build_dimer(eps, v).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let t = 0.25 * PI / v;
        let traj = propagate_spectral(&h, &c0, &[t]).unwrap();
        let pops = populations(traj.state(0));
        assert!((pops[0] - 0.5).abs() <= 1e-12);
        assert!((pops[1] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn coherence_values_and_phase_invariance() {
        let z = [Complex64::ONE, Complex64::ZERO];
        assert_eq!(coherence(&z, 0, 1).unwrap(), Complex64::ZERO);
        assert!(coherence(&z, 0, 5).is_err());

        // Exact dimer coherence at Vt = π/4 is -i/2, global phase gone.
        let (eps, v) = (1.0, 0.005);
        let h = build_dimer(eps, v).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let t = 0.25 * PI / v;
        let traj = propagate_spectral(&h, &c0, &[t]).unwrap();
        let coh = coherence(traj.state(0), 0, 1).unwrap();
        assert!((coh - Complex64::new(0.0, -0.5)).norm() <= 1e-12);
        assert!(coh.re.abs() <= 1e-12);

        let phase = Complex64::new(0.0, 0.83).exp();
        let rotated: Vec<Complex64> = traj.state(0).iter().map(|z| z * phase).collect();
        let coh2 = coherence(&rotated, 0, 1).unwrap();
        assert!((coh - coh2).norm() <= 1e-15);
    }

    #[test]
    fn classical_energy_matches_quantum_expectation() {
        let h = Hamiltonian::from_dense(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let s = PhaseSpaceState::new(vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
        assert!((classical_energy(&h, &s).unwrap() - 1.0).abs() <= 1e-15);

        let h = build_dimer(1.0, 0.2).unwrap();
        let s = PhaseSpaceState::new(vec![0.4, -0.3], vec![0.2, 0.9]).unwrap();
        let z = assemble_amplitudes(&s);
        let eh = expectation_energy(&h, z.values()).unwrap();
        assert!((classical_energy(&h, &s).unwrap() - eh).abs() <= 1e-14);
    }

    #[test]
    fn classical_energy_conserved_along_flow() {
        let h = build_dimer(1.0, 0.005).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let s0 = quantum_to_phase_space(&c0);
        let e0 = classical_energy(&h, &s0).unwrap();
        // Starting energy equals the quantum expectation value.
        assert!((e0 - expectation_energy(&h, c0.values()).unwrap()).abs() <= 1e-14);

        let plan = IntegrationPlan::uniform(2.0 * PI / 2000.0, 200.0, 101).unwrap();
        let traj = integrate_hamilton(&h, &s0, &plan).unwrap();
        for i in 0..traj.len() {
            let e = classical_energy(&h, traj.state(i)).unwrap();
            assert!(((e - e0) / e0).abs() <= 1e-9, "drifted at sample {i}");
        }
    }

    #[test]
    fn compare_identical_trajectories() {
        let h = build_dimer(1.0, 0.005).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 2.0).collect();
        let traj = propagate_spectral(&h, &c0, &times).unwrap();
        let report = compare(&traj, &traj, &CompareOptions::default()).unwrap();
        assert_eq!(report.max_abs_amplitude_diff, 0.0);
        assert_eq!(report.max_population_diff, 0.0);
        assert_eq!(report.rms_population_diff, 0.0);
        assert_eq!(report.max_coherence_diff, 0.0);
        assert!(!report.phase_compensated);
        assert_eq!(report.time_window, (0.0, 98.0));
    }

    #[test]
    fn compare_is_symmetric_without_compensation() {
        let h = build_dimer(1.0, 0.01).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let times: Vec<f64> = (0..60).map(|i| i as f64 * 1.5).collect();
        let a = propagate_spectral(&h, &c0, &times).unwrap();
        let h2 = build_dimer(1.0, 0.0101).unwrap();
        let b = propagate_spectral(&h2, &c0, &times).unwrap();

        let ab = compare(&a, &b, &CompareOptions::default()).unwrap();
        let ba = compare(&b, &a, &CompareOptions::default()).unwrap();
        assert_eq!(ab.max_abs_amplitude_diff, ba.max_abs_amplitude_diff);
        assert_eq!(ab.max_population_diff, ba.max_population_diff);
        assert_eq!(ab.max_coherence_diff, ba.max_coherence_diff);
    }

    #[test]
    fn compare_rejects_grid_mismatch() {
        let h = build_dimer(1.0, 0.01).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let a = propagate_spectral(&h, &c0, &[0.0, 1.0]).unwrap();
        let b = propagate_spectral(&h, &c0, &[0.0, 1.5]).unwrap();
        assert!(matches!(
            compare(&a, &b, &CompareOptions::default()),
            Err(Error::GridMismatch)
        ));
        let c = propagate_spectral(&h, &c0, &[0.0]).unwrap();
        assert!(matches!(
            compare(&a, &c, &CompareOptions::default()),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn global_phase_cancels_in_population_and_coherence_metrics() {
        let h = build_dimer(1.0, 0.01).unwrap();
        let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * 3.0).collect();
        let a = propagate_spectral(&h, &c0, &times).unwrap();
        let b = crate::classical_rca::phase_compensate(&a, 0.123);
        let report = compare(&a, &b, &CompareOptions::default()).unwrap();
        assert!(report.max_population_diff <= 1e-14);
        assert!(report.max_coherence_diff <= 1e-14);
        // The raw amplitudes do differ.
        assert!(report.max_abs_amplitude_diff > 0.1);
        // And compensating by the same shift removes that too.
        let report = compare(
            &a,
            &b,
            &CompareOptions {
                phase_delta: Some(-0.123),
                coherence_pairs: vec![],
            },
        )
        .unwrap();
        assert!(report.max_abs_amplitude_diff <= 1e-13);
    }
}
