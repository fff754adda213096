//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N (...): PASS` line (run with `--nocapture` to see them).
//! Tolerances are fixed here, not tuned at runtime.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use oscmap::analysis;
use oscmap::classical_exact::{self, quantum_to_phase_space};
use oscmap::classical_rca::{self, spectral_shift};
use oscmap::integrators::{self, ComplexTrajectory, IntegrationPlan};
use oscmap::linalg::{self, RealSymmetricMatrix};
use oscmap::models::{self, build_dimer, build_ring, Hamiltonian};
use oscmap::quantum::{self, ComplexAmplitudeVector, LevelWidths};

fn random_hamiltonian(n: usize, rng: &mut impl Rng) -> Hamiltonian {
    let m = RealSymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            rng.random_range(0.8..1.2)
        } else {
            rng.random_range(-0.05..0.05)
        }
    });
    Hamiltonian::from_matrix(m).unwrap()
}

fn random_state(n: usize, rng: &mut impl Rng) -> ComplexAmplitudeVector {
    let mut vals: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = vals.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut vals {
        *z /= norm;
    }
    ComplexAmplitudeVector::normalized(vals).unwrap()
}

fn max_amplitude_diff(a: &ComplexTrajectory, b: &ComplexTrajectory) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for n in 0..a.dim() {
            worst = worst.max((a.state(i)[n] - b.state(i)[n]).norm());
        }
    }
    worst
}

fn max_population_diff(a: &ComplexTrajectory, b: &ComplexTrajectory) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for n in 0..a.dim() {
            worst = worst.max((a.state(i)[n].norm_sqr() - b.state(i)[n].norm_sqr()).abs());
        }
    }
    worst
}

struct SpringRun {
    rca: ComplexTrajectory,
    /// Spectral quantum solution on the same grid.
    quantum: ComplexTrajectory,
    shift: f64,
    plan: IntegrationPlan,
}

/// Run the spring-form oscillators against the spectral quantum solution
/// for a dimer beating start, over `tau_end` beat-phase units (τ = V t).
fn spring_vs_quantum(
    epsilon: f64,
    v: f64,
    tau_end: f64,
    samples: usize,
    gamma: Option<f64>,
) -> SpringRun {
    let h = build_dimer(epsilon, v).unwrap();
    let sys = classical_rca::build_q_coupled_spring(&h).unwrap();
    let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
    let (q0, v0) = sys.initial_state(&c0).unwrap();

    let t_end = tau_end / v.abs();
    let dt = integrators::suggested_dt(sys.system().max_mode_frequency());
    let plan = IntegrationPlan::uniform(dt, t_end, samples).unwrap();

    let traj = match gamma {
        Some(g) => {
            let damped = classical_rca::build_damped(&sys, &[g, g]).unwrap();
            integrators::rk4_second_order(&damped, &q0, &v0, &plan).unwrap()
        }
        None => integrators::verlet_second_order(sys.system(), &q0, &v0, &plan).unwrap(),
    };
    let rca = classical_rca::rca_trajectory_amplitudes(&sys, &traj).unwrap();
    let quantum = quantum::propagate_spectral(&h, &c0, rca.times()).unwrap();
    SpringRun {
        rca,
        quantum,
        shift: spectral_shift(&sys),
        plan,
    }
}

#[test]
fn criterion_01_exact_equivalence_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.random_range(2..=16);
        let h = random_hamiltonian(n, &mut rng);
        let c0 = random_state(n, &mut rng);

        let dec = h.spectrum().unwrap();
        let max_freq = dec.eigenvalues().iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let plan =
            IntegrationPlan::uniform(integrators::suggested_dt(max_freq), 50.0, 101).unwrap();

        let classical = classical_exact::exact_classical_evolve(&h, &c0, &plan).unwrap();
        let reference = quantum::propagate_spectral(&h, &c0, classical.times()).unwrap();
        let dev = max_amplitude_diff(&classical, &reference);
        assert!(
            dev <= 1e-7,
            "case {case} (n = {n}): deviation {dev:e} above 1e-7"
        );
        worst = worst.max(dev);
    }
    println!(
        "criterion 1 (exact equivalence, 100 random systems): PASS, worst |z - c| = {worst:e}"
    );
}

#[test]
fn criterion_02_dimer_closed_form() {
    let (eps, v) = (1.0, 0.005);
    let h = build_dimer(eps, v).unwrap();
    let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
    let times: Vec<f64> = (0..1000).map(|i| 100.0 * PI * i as f64 / 999.0).collect();
    let spectral = quantum::propagate_spectral(&h, &c0, &times).unwrap();
    let closed = quantum::dimer_closed_form(eps, v, &times);
    let dev = max_amplitude_diff(&spectral, &closed);
    assert!(dev <= 1e-12, "closed-form deviation {dev:e} above 1e-12");
    println!("criterion 2 (dimer closed form at 1000 samples): PASS, worst deviation = {dev:e}");
}

#[test]
fn criterion_03_spectra() {
    // Dimer: ε ± V to 1e-12.
    for (eps, v) in [(1.0, 0.005), (1.0, 0.05), (2.0, 0.3)] {
        let dec = build_dimer(eps, v).unwrap().spectrum().unwrap();
        assert!((dec.eigenvalues()[0] - (eps - v)).abs() <= 1e-12);
        assert!((dec.eigenvalues()[1] - (eps + v)).abs() <= 1e-12);
    }

    // Rings: dispersion multisets to 1e-10.
    let (eps, v) = (1.0, 0.1);
    for n in [3usize, 4, 6, 12] {
        let dec = build_ring(n, eps, v).unwrap().spectrum().unwrap();
        let mut want: Vec<f64> = (0..n)
            .map(|j| eps + 2.0 * v * (2.0 * PI * j as f64 / n as f64).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in dec.eigenvalues().iter().zip(&want) {
            assert!((got - want).abs() <= 1e-10, "ring n = {n}");
        }
    }

    // Exact-oscillator stiffness eigenfrequencies equal |E_k| to 1e-10.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &n in &[2usize, 5, 9] {
        let h = random_hamiltonian(n, &mut rng);
        let sys = classical_exact::build_pq_system(&h).unwrap();
        let freqs = sys.mode_frequencies().unwrap();
        let mut abs_e: Vec<f64> = h
            .spectrum()
            .unwrap()
            .eigenvalues()
            .iter()
            .map(|e| e.abs())
            .collect();
        abs_e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (f, e) in freqs.iter().zip(&abs_e) {
            assert!((f - e).abs() <= 1e-10);
        }
    }

    // Ring stiffness carries exactly V² on the next-nearest diagonal.
    for n in [5usize, 6, 8] {
        let sys = classical_exact::build_pq_system(&build_ring(n, eps, v).unwrap()).unwrap();
        for i in 0..n {
            assert_eq!(sys.stiffness().get(i, (i + 2) % n), v * v, "ring n = {n}");
        }
    }

    println!("criterion 3 (dimer/ring spectra, stiffness frequencies, V² terms): PASS");
}

#[test]
fn criterion_04_weak_coupling_figure_contract() {
    let (eps, k) = (1.0, 0.01);
    let v = k / (2.0 * eps);

    // Populations over a full beat window.
    let run = spring_vs_quantum(eps, v, 2.0 * PI, 1000, None);
    let pop_dev = max_population_diff(&run.rca, &run.quantum);
    assert!(pop_dev <= 0.04, "population deviation {pop_dev} above 0.04");

    // Phase compensation must buy at least 5x on Re z_0 over the first
    // quarter window.
    let quarter = spring_vs_quantum(eps, v, 0.5 * PI, 500, None);
    let raw: f64 = (0..quarter.rca.len())
        .map(|i| (quarter.rca.state(i)[0].re - quarter.quantum.state(i)[0].re).abs())
        .fold(0.0, f64::max);
    let compensated_traj = classical_rca::phase_compensate(&quarter.rca, quarter.shift);
    let compensated: f64 = (0..quarter.rca.len())
        .map(|i| (compensated_traj.state(i)[0].re - quarter.quantum.state(i)[0].re).abs())
        .fold(0.0, f64::max);
    assert!(
        raw >= 5.0 * compensated,
        "compensation gain {} below 5x (raw {raw}, compensated {compensated})",
        raw / compensated
    );

    // The exact path's coherence is purely imaginary for the beating start.
    let max_re_coherence: f64 = (0..run.quantum.len())
        .map(|i| {
            analysis::coherence(run.quantum.state(i), 0, 1)
                .unwrap()
                .re
                .abs()
        })
        .fold(0.0, f64::max);
    assert!(
        max_re_coherence <= 1e-10,
        "Re coherence {max_re_coherence:e} above 1e-10"
    );

    println!(
        "criterion 4 (K = 0.01 figure contract): PASS, pop dev = {pop_dev:.4}, \
         compensation gain = {:.1}x, max Re coherence = {max_re_coherence:e}",
        raw / compensated
    );
}

#[test]
fn criterion_05_breakdown_figure_contract() {
    let (eps, k) = (1.0, 0.1);
    let v = k / (2.0 * eps);
    let run = spring_vs_quantum(eps, v, 2.0 * PI, 1000, None);
    let pop_dev = max_population_diff(&run.rca, &run.quantum);
    assert!(
        (0.15..=0.45).contains(&pop_dev),
        "population deviation {pop_dev} outside [0.15, 0.45]"
    );
    println!("criterion 5 (K = 0.1 breakdown contract): PASS, pop dev = {pop_dev:.4}");
}

#[test]
fn criterion_06_conservation() {
    let (eps, v) = (1.0, 0.005);
    let h = build_dimer(eps, v).unwrap();
    let c0 = ComplexAmplitudeVector::normalized(vec![
        Complex64::new(0.8, 0.1),
        Complex64::new(-0.3, (1.0f64 - 0.64 - 0.01 - 0.09).sqrt()),
    ])
    .unwrap();
    let s0 = quantum_to_phase_space(&c0);
    let sys = classical_exact::build_pq_system(&h).unwrap();
    let v0 = h.matrix().matvec(s0.p());

    // 1e5 Verlet steps, sampled every 1000 steps.
    let dt = 2.5e-5;
    let steps: u64 = 100_000;
    let times: Vec<f64> = (0..=steps).step_by(1000).map(|k| k as f64 * dt).collect();
    let plan = IntegrationPlan::new(dt, steps as f64 * dt, &times).unwrap();
    let traj = integrators::verlet_second_order(&sys, s0.q(), &v0, &plan).unwrap();

    let dec = h.spectrum().unwrap();
    let energy0 = analysis::classical_energy(&h, &s0).unwrap();
    let norm0 = c0.norm_sq();
    let mut worst_energy = 0.0f64;
    let mut worst_norm = 0.0f64;
    for i in 0..traj.len() {
        let p = linalg::solve_with_decomposition(&dec, traj.velocity(i)).unwrap();
        let state = classical_exact::PhaseSpaceState::new(traj.position(i).to_vec(), p).unwrap();
        let energy = analysis::classical_energy(&h, &state).unwrap();
        worst_energy = worst_energy.max(((energy - energy0) / energy0).abs());
        let z = classical_exact::assemble_amplitudes(&state);
        worst_norm = worst_norm.max(((z.norm_sq() - norm0) / norm0).abs());
    }
    assert!(
        worst_energy <= 1e-9,
        "energy drift {worst_energy:e} above 1e-9"
    );
    assert!(worst_norm <= 1e-9, "norm drift {worst_norm:e} above 1e-9");

    // Quantum spectral norm stays at 1 to 1e-12.
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut worst_quantum_norm = 0.0f64;
    for _ in 0..5 {
        let n = rng.random_range(2..9);
        let h = random_hamiltonian(n, &mut rng);
        let c0 = random_state(n, &mut rng);
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.5).collect();
        let traj = quantum::propagate_spectral(&h, &c0, &times).unwrap();
        for i in 0..traj.len() {
            let norm: f64 = traj.state(i).iter().map(|z| z.norm_sqr()).sum();
            worst_quantum_norm = worst_quantum_norm.max((norm - 1.0).abs());
        }
    }
    assert!(worst_quantum_norm <= 1e-12);

    println!(
        "criterion 6 (conservation over 1e5 Verlet steps): PASS, energy band = {worst_energy:e}, \
         norm band = {worst_norm:e}, spectral norm dev = {worst_quantum_norm:e}"
    );
}

#[test]
fn criterion_07_rca_scaling() {
    let eps = 1.0f64;
    let ks = [1e-3f64, 1e-2, 1e-1];
    let mut splitting_errors = Vec::new();
    let mut pop_devs = Vec::new();
    for &k in &ks {
        let v = k / (2.0 * eps);
        let spring_splitting = (eps * eps + 2.0 * k).sqrt() - eps;
        splitting_errors.push((spring_splitting - k / eps).abs());
        let run = spring_vs_quantum(eps, v, 2.0 * PI, 1000, None);
        pop_devs.push(max_population_diff(&run.rca, &run.quantum));
    }

    // Both metrics must shrink monotonically with K.
    assert!(splitting_errors[0] < splitting_errors[1]);
    assert!(splitting_errors[1] < splitting_errors[2]);
    assert!(pop_devs[0] < pop_devs[1], "pop devs {pop_devs:?}");
    assert!(pop_devs[1] < pop_devs[2], "pop devs {pop_devs:?}");

    // Population deviation scales about linearly: successive ratios for a
    // 10x step in K stay within [0.05, 0.2].
    let r10 = pop_devs[0] / pop_devs[1];
    let r21 = pop_devs[1] / pop_devs[2];
    assert!(
        (0.05..=0.2).contains(&r10),
        "ratio {r10} outside [0.05, 0.2]"
    );
    assert!(
        (0.05..=0.2).contains(&r21),
        "ratio {r21} outside [0.05, 0.2]"
    );

    println!(
        "criterion 7 (scaling over K = 1e-3, 1e-2, 1e-1): PASS, pop devs = {:?}, ratios = {:.3}, {:.3}",
        pop_devs, r10, r21
    );
}

#[test]
fn criterion_08_damping() {
    let (eps, k, gamma) = (1.0, 0.01, 0.001);
    let v = k / (2.0 * eps);

    // Classical: uniform damping factors out of the per-site moduli.
    let damped_run = spring_vs_quantum(eps, v, 2.0 * PI, 500, Some(gamma));
    let undamped_run = spring_vs_quantum(eps, v, 2.0 * PI, 500, None);
    let damped = &damped_run.rca;
    let undamped = &undamped_run.rca;
    let mut worst_classical = 0.0f64;
    for (i, &t) in damped.times().iter().enumerate() {
        let decay = (-gamma * t).exp();
        for n in 0..2 {
            let want = decay * undamped.state(i)[n].norm();
            worst_classical = worst_classical.max((damped.state(i)[n].norm() - want).abs());
        }
    }
    assert!(
        worst_classical <= 2e-3,
        "classical damping deviation {worst_classical:e} above 2e-3"
    );

    // Quantum: uniform width is an exact exponential prefactor.
    let h = build_dimer(eps, v).unwrap();
    let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
    let widths = LevelWidths::uniform(2, gamma).unwrap();
    let dt = integrators::suggested_dt(eps + v);
    let plan = IntegrationPlan::uniform(dt, 2.0 * PI / v, 500).unwrap();
    let damped_q = quantum::propagate_damped(&h, &widths, &c0, &plan).unwrap();
    let undamped_q = quantum::propagate_ode(&h, &c0, &plan).unwrap();
    let mut worst_quantum = 0.0f64;
    for (i, &t) in damped_q.times().iter().enumerate() {
        let decay = (-gamma * t).exp();
        for n in 0..2 {
            let want = undamped_q.state(i)[n] * decay;
            worst_quantum = worst_quantum.max((damped_q.state(i)[n] - want).norm());
        }
    }
    assert!(
        worst_quantum <= 1e-9,
        "quantum damping deviation {worst_quantum:e} above 1e-9"
    );

    // Cross-check: damped oscillators against the damped quantum system on
    // the very same plan.
    let reference = quantum::propagate_damped(&h, &widths, &c0, &damped_run.plan).unwrap();
    let cross = max_population_diff(damped, &reference);
    assert!(
        cross <= 0.041,
        "cross comparison deviation {cross} above 0.041"
    );

    println!(
        "criterion 8 (uniform damping): PASS, classical = {worst_classical:e}, \
         quantum = {worst_quantum:e}, cross = {cross:.4}"
    );
}

#[test]
fn criterion_09_lc_mapping() {
    for k in [0.01, 0.02] {
        let pair = models::LcCircuitPair::new(1.0, 1.0, k).unwrap();
        let mapping = models::lc_to_oscillator(&pair);
        let gap = (mapping.omega_minus - mapping.omega_minus_weak_coupling()).abs();
        assert!(
            gap <= 2.0 * k * k * mapping.omega,
            "K = {k}: mode frequency gap {gap:e} above 2K²ω"
        );

        // The equivalent dimer shows the weak-coupling figure behaviour,
        // with the population bound scaled linearly in K.
        let run = spring_vs_quantum(mapping.omega, mapping.v_equiv, 2.0 * PI, 500, None);
        let pop_dev = max_population_diff(&run.rca, &run.quantum);
        assert!(pop_dev <= 0.04 * (k / 0.01), "K = {k}: pop dev {pop_dev}");

        let quarter = spring_vs_quantum(mapping.omega, mapping.v_equiv, 0.5 * PI, 300, None);
        let raw: f64 = (0..quarter.rca.len())
            .map(|i| (quarter.rca.state(i)[0].re - quarter.quantum.state(i)[0].re).abs())
            .fold(0.0, f64::max);
        let comp_traj = classical_rca::phase_compensate(&quarter.rca, quarter.shift);
        let comp: f64 = (0..quarter.rca.len())
            .map(|i| (comp_traj.state(i)[0].re - quarter.quantum.state(i)[0].re).abs())
            .fold(0.0, f64::max);
        assert!(
            raw >= 5.0 * comp,
            "K = {k}: compensation gain {} below 5x",
            raw / comp
        );
    }
    println!("criterion 9 (LC mapping, K = 0.01 and 0.02): PASS");
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = (
        xs.iter().map(|x| x.ln()).collect(),
        ys.iter().map(|y| y.ln()).collect(),
    );
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[test]
fn criterion_10_integrator_orders() {
    let (eps, v) = (1.0, 0.005);
    let h = build_dimer(eps, v).unwrap();
    let c0 = ComplexAmplitudeVector::site_basis(2, 0).unwrap();
    let t_end = 20.0;

    // RK4 against the spectral solution.
    let dts = [0.2, 0.1, 0.05, 0.025];
    let mut errors = Vec::new();
    for &dt in &dts {
        let plan = IntegrationPlan::uniform(dt, t_end, 21).unwrap();
        let ode = quantum::propagate_ode(&h, &c0, &plan).unwrap();
        let reference = quantum::propagate_spectral(&h, &c0, ode.times()).unwrap();
        errors.push(max_amplitude_diff(&ode, &reference));
    }
    let rk4_slope = fitted_slope(&dts, &errors);
    assert!(
        (3.7..=4.3).contains(&rk4_slope),
        "RK4 slope {rk4_slope} outside 4 ± 0.3 (errors {errors:?})"
    );

    // Verlet against the normal-mode closed form of the exact oscillators.
    let sys = classical_exact::build_pq_system(&h).unwrap();
    let dec = linalg::eig_sym(sys.stiffness()).unwrap();
    let q0 = [2.0f64.sqrt(), 0.0];
    let reference = |t: f64| -> Vec<f64> {
        let coeffs = dec.mode_coefficients(&q0);
        let scaled: Vec<f64> = coeffs
            .iter()
            .zip(dec.eigenvalues())
            .map(|(a, l)| a * (l.sqrt() * t).cos())
            .collect();
        dec.synthesize(&scaled)
    };
    let dts = [0.04, 0.02, 0.01, 0.005];
    let mut errors = Vec::new();
    for &dt in &dts {
        let plan = IntegrationPlan::uniform(dt, t_end, 21).unwrap();
        let traj = integrators::verlet_second_order(&sys, &q0, &[0.0, 0.0], &plan).unwrap();
        let mut worst = 0.0f64;
        for (i, &t) in traj.times().iter().enumerate() {
            let want = reference(t);
            for n in 0..2 {
                worst = worst.max((traj.position(i)[n] - want[n]).abs());
            }
        }
        errors.push(worst);
    }
    let verlet_slope = fitted_slope(&dts, &errors);
    assert!(
        (1.7..=2.3).contains(&verlet_slope),
        "Verlet slope {verlet_slope} outside 2 ± 0.3 (errors {errors:?})"
    );

    println!(
        "criterion 10 (convergence orders): PASS, RK4 slope = {rk4_slope:.3}, \
         Verlet slope = {verlet_slope:.3}"
    );
}
