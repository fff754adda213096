//! The four subcommands: `spectrum`, `evolve`, `compare`, `sweep`.
//!
//! All of them resolve the model and plan the same way, so a sweep point
//! and a standalone compare run with the same parameters produce identical
//! numbers.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;

use super::config::{InitialState, Method, ModelSpec, RunConfig};
use super::output::{self, fmt17, MethodRun};
use super::CliError;
use crate::analysis::{self, CompareOptions, ComparisonReport};
use crate::classical_exact;
use crate::classical_rca;
use crate::integrators::{self, IntegrationPlan};
use crate::models::{self, Hamiltonian};
use crate::quantum::{self, ComplexAmplitudeVector, LevelWidths};

fn numeric(err: crate::Error) -> CliError {
    CliError::Numeric(err)
}

fn initial_amplitudes(
    config: &RunConfig,
    h: &Hamiltonian,
) -> Result<ComplexAmplitudeVector, CliError> {
    match &config.initial {
        InitialState::Site(idx) => {
            ComplexAmplitudeVector::site_basis(h.dim(), *idx).map_err(|_| {
                CliError::Config(format!(
                    "initial site {idx} out of range for a {}-site model",
                    h.dim()
                ))
            })
        }
        InitialState::Vector(values) => {
            if values.len() != h.dim() {
                return Err(CliError::Config(format!(
                    "initial vector has {} components, model has {} sites",
                    values.len(),
                    h.dim()
                )));
            }
            ComplexAmplitudeVector::new(values.clone()).map_err(CliError::config_from)
        }
    }
}

fn effective_gamma(config: &RunConfig, dim: usize) -> Result<Option<Vec<f64>>, CliError> {
    match &config.gamma {
        None => Ok(None),
        Some(g) if g.len() == dim => Ok(Some(g.clone())),
        Some(g) if g.len() == 1 => Ok(Some(vec![g[0]; dim])),
        Some(g) => Err(CliError::Config(format!(
            "damping.gamma has {} entries, model has {dim} sites",
            g.len()
        ))),
    }
}

/// The coupling scale that converts raw time into the dimensionless τ used
/// by comparison outputs; 1 when the model is uncoupled.
fn tau_scale(h: &Hamiltonian) -> f64 {
    let v = h.max_coupling();
    if v > 0.0 {
        v
    } else {
        1.0
    }
}

/// Resolve the integration plan: `dt` defaults to a thousandth of the
/// shortest quantum period, `t_end` to one full transfer window 2π/max|V|.
fn plan_for(h: &Hamiltonian, config: &RunConfig) -> Result<IntegrationPlan, CliError> {
    let dec = h.spectrum().map_err(numeric)?;
    let max_freq = dec.eigenvalues().iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let dt = match config.dt {
        Some(dt) => dt,
        None => integrators::suggested_dt(max_freq.max(f64::MIN_POSITIVE)),
    };
    let t_end = match config.t_end {
        Some(t) => t,
        None => {
            let v = h.max_coupling();
            if v > 0.0 {
                2.0 * std::f64::consts::PI / v
            } else {
                50.0
            }
        }
    };
    IntegrationPlan::uniform(dt, t_end, config.samples).map_err(CliError::config_from)
}

fn coherence_pairs(config: &RunConfig, dim: usize) -> Result<Vec<(usize, usize)>, CliError> {
    if config.coherence_pairs.is_empty() {
        return Ok(if dim >= 2 { vec![(0, 1)] } else { vec![] });
    }
    for &(i, j) in &config.coherence_pairs {
        if i >= dim || j >= dim {
            return Err(CliError::Config(format!(
                "coherence pair {i}:{j} out of range for a {dim}-site model"
            )));
        }
    }
    Ok(config.coherence_pairs.clone())
}

/// Propagate one method on the shared plan.
fn method_run(
    h: &Hamiltonian,
    method: Method,
    c0: &ComplexAmplitudeVector,
    gamma: Option<&[f64]>,
    plan: &IntegrationPlan,
) -> Result<MethodRun, CliError> {
    let label = method.label();
    match method {
        Method::QuantumSpectral => {
            if gamma.is_some() {
                return Err(CliError::Config(
                    "quantum-spectral has no damped form; use quantum-ode with gamma".into(),
                ));
            }
            let z = quantum::propagate_spectral(h, c0, &plan.sample_times()).map_err(numeric)?;
            Ok(MethodRun::from_amplitudes(label, z))
        }
        Method::QuantumOde => {
            let z = match gamma {
                Some(g) => {
                    let widths = LevelWidths::new(g.to_vec()).map_err(CliError::config_from)?;
                    quantum::propagate_damped(h, &widths, c0, plan).map_err(numeric)?
                }
                None => quantum::propagate_ode(h, c0, plan).map_err(numeric)?,
            };
            Ok(MethodRun::from_amplitudes(label, z))
        }
        Method::ClassicalExact => {
            if gamma.is_some() {
                return Err(CliError::Config(
                    "classical-exact has no damped form (velocity damping maps onto the \
                     position-coupled variants); use classical-rca or classical-rca-spring"
                        .into(),
                ));
            }
            let s0 = classical_exact::quantum_to_phase_space(c0);
            let traj = classical_exact::integrate_hamilton(h, &s0, plan).map_err(numeric)?;
            let q = (0..traj.len())
                .map(|i| traj.state(i).q().to_vec())
                .collect();
            let p = (0..traj.len())
                .map(|i| traj.state(i).p().to_vec())
                .collect();
            Ok(MethodRun {
                label,
                z: traj.amplitudes(),
                q,
                p,
            })
        }
        Method::ClassicalRca | Method::ClassicalRcaSpring => {
            let sys = match method {
                Method::ClassicalRca => classical_rca::build_q_coupled(h),
                _ => classical_rca::build_q_coupled_spring(h),
            }
            .map_err(numeric)?;
            if !sys.system().is_positive_definite() {
                eprintln!(
                    "warning: {label} stiffness matrix is not positive definite; \
                     the oscillator picture is outside its physical regime"
                );
            }
            let (q0, v0) = sys.initial_state(c0).map_err(numeric)?;
            let traj = match gamma {
                Some(g) => {
                    let damped =
                        classical_rca::build_damped(&sys, g).map_err(CliError::config_from)?;
                    integrators::rk4_second_order(&damped, &q0, &v0, plan).map_err(numeric)?
                }
                None => integrators::verlet_second_order(sys.system(), &q0, &v0, plan)
                    .map_err(numeric)?,
            };
            let z = classical_rca::rca_trajectory_amplitudes(&sys, &traj).map_err(numeric)?;
            let wbar = sys.omega_bar();
            let q = (0..traj.len()).map(|i| traj.position(i).to_vec()).collect();
            let p = (0..traj.len())
                .map(|i| traj.velocity(i).iter().map(|v| v / wbar).collect())
                .collect();
            Ok(MethodRun { label, z, q, p })
        }
    }
}

/// Uniform spectral shift a method carries relative to the quantum
/// spectrum; nonzero only for the position-coupled variants.
fn method_shift(h: &Hamiltonian, method: Method) -> Result<f64, CliError> {
    match method {
        Method::ClassicalRca => Ok(classical_rca::spectral_shift(
            &classical_rca::build_q_coupled(h).map_err(numeric)?,
        )),
        Method::ClassicalRcaSpring => Ok(classical_rca::spectral_shift(
            &classical_rca::build_q_coupled_spring(h).map_err(numeric)?,
        )),
        _ => Ok(0.0),
    }
}

pub fn run_spectrum(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let h = config.model.hamiltonian()?;
    let n = h.dim();
    let dec = h.spectrum().map_err(numeric)?;
    let bare = classical_rca::build_q_coupled(&h).map_err(numeric)?;
    let effective = classical_rca::rca_effective_spectrum(&bare).map_err(numeric)?;
    let spring = classical_rca::build_q_coupled_spring(&h).map_err(numeric)?;
    let spring_freqs = spring.system().mode_frequencies().map_err(numeric)?;
    let validity = classical_rca::rca_validity_ratio(&h).map_err(numeric)?;

    let mut body = String::new();
    body.push_str(&format!("model: {}\n", config.model.describe()));
    body.push_str(&format!("dimension: {n}\n"));
    for (k, e) in dec.eigenvalues().iter().enumerate() {
        body.push_str(&format!("eigenvalue_{k}: {}\n", fmt17(*e)));
    }
    for k in 0..n {
        let row: Vec<String> = dec.eigenvector(k).iter().map(|x| fmt17(*x)).collect();
        body.push_str(&format!("eigenvector_{k}: {}\n", row.join(" ")));
    }
    for (k, e) in effective.eigenvalues().iter().enumerate() {
        body.push_str(&format!("rca_effective_eigenvalue_{k}: {}\n", fmt17(*e)));
    }
    for (k, f) in spring_freqs.iter().enumerate() {
        body.push_str(&format!("rca_spring_frequency_{k}: {}\n", fmt17(*f)));
    }
    body.push_str(&format!(
        "rca_coupling_ratio: {}\n",
        fmt17(validity.coupling_ratio)
    ));
    body.push_str(&format!(
        "rca_second_order_ratio: {}\n",
        fmt17(validity.second_order_ratio)
    ));
    body.push_str(&format!(
        "rca_non_rotating_scale: {}\n",
        fmt17(validity.non_rotating_scale)
    ));
    body.push_str(&format!(
        "rca_status: {}\n",
        if validity.degrading {
            "degrading"
        } else {
            "ok"
        }
    ));

    if let ModelSpec::Lc {
        inductance,
        capacitance,
        coupling_capacitance,
    } = &config.model
    {
        let pair = models::LcCircuitPair::new(*inductance, *capacitance, *coupling_capacitance)
            .map_err(CliError::config_from)?;
        let mapping = models::lc_to_oscillator(&pair);
        body.push_str(&format!("lc_omega: {}\n", fmt17(mapping.omega)));
        body.push_str(&format!("lc_k_ratio: {}\n", fmt17(mapping.k_ratio)));
        body.push_str(&format!("lc_v_equiv: {}\n", fmt17(mapping.v_equiv)));
        body.push_str(&format!(
            "lc_omega_minus_exact: {}\n",
            fmt17(mapping.omega_minus)
        ));
        body.push_str(&format!(
            "lc_omega_minus_weak_coupling: {}\n",
            fmt17(mapping.omega_minus_weak_coupling())
        ));
    }

    if let Some(expansion) = classical_exact::pq_expansion(&h) {
        for (i, line) in expansion.lines().enumerate() {
            body.push_str(&format!("pq_equation_{i}: {line}\n"));
        }
    }

    let path = out_path(config, "spectrum.txt");
    output::write_report(&path, &body)?;
    Ok(vec![path])
}

fn out_path(config: &RunConfig, suffix: &str) -> PathBuf {
    let mut name = config
        .out_prefix
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "oscmap_out".to_string());
    name.push('_');
    name.push_str(suffix);
    config.out_prefix.with_file_name(name)
}

pub fn run_evolve(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let h = config.model.hamiltonian()?;
    let c0 = initial_amplitudes(config, &h)?;
    let gamma = effective_gamma(config, h.dim())?;
    let plan = plan_for(&h, config)?;
    let pairs = coherence_pairs(config, h.dim())?;

    let mut methods = Vec::new();
    for &m in &config.methods {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }

    let mut written: Vec<PathBuf> = Vec::new();
    for &method in &methods {
        let result = method_run(&h, method, &c0, gamma.as_deref(), &plan).and_then(|run| {
            let path = out_path(config, &format!("{}.csv", method.label()));
            output::write_trajectory_csv(&path, &run, &pairs)?;
            written.push(path);
            Ok(())
        });
        if let Err(err) = result {
            // No partial output set: remove what this invocation wrote.
            for path in &written {
                let _ = std::fs::remove_file(path);
            }
            return Err(err);
        }
    }
    Ok(written)
}

/// Everything `compare` measures for one model/plan; shared with `sweep` so
/// a single sweep point and a standalone compare agree exactly.
struct PairComparison {
    report: ComparisonReport,
    run_a: MethodRun,
    run_b: MethodRun,
    delta_omega: f64,
}

fn compare_pair(
    h: &Hamiltonian,
    config: &RunConfig,
    plan: &IntegrationPlan,
) -> Result<PairComparison, CliError> {
    if config.methods.len() != 2 {
        return Err(CliError::Config(format!(
            "compare needs exactly two methods, got {}",
            config.methods.len()
        )));
    }
    let (ma, mb) = (config.methods[0], config.methods[1]);
    let c0 = initial_amplitudes(config, h)?;
    let gamma = effective_gamma(config, h.dim())?;
    let run_a = method_run(h, ma, &c0, gamma.as_deref(), plan)?;
    let run_b = method_run(h, mb, &c0, gamma.as_deref(), plan)?;

    let delta_omega = method_shift(h, mb)? - method_shift(h, ma)?;
    let options = CompareOptions {
        phase_delta: (delta_omega != 0.0).then_some(delta_omega),
        coherence_pairs: coherence_pairs(config, h.dim())?,
    };
    let report = analysis::compare(&run_a.z, &run_b.z, &options).map_err(numeric)?;
    Ok(PairComparison {
        report,
        run_a,
        run_b,
        delta_omega,
    })
}

fn write_panels_csv(
    path: &std::path::Path,
    tau: f64,
    cmp: &PairComparison,
) -> Result<(), CliError> {
    let dim = cmp.run_a.z.dim();
    let mut header = String::from("tau,t,pop0_a,pop0_b,re_z0_a,re_z0_b_comp");
    if dim >= 2 {
        header.push_str(",im_coh01_a,im_coh01_b");
    }
    let mut rows = Vec::with_capacity(cmp.run_a.z.len());
    for (i, (t, sa)) in cmp.run_a.z.iter().enumerate() {
        let sb = cmp.run_b.z.state(i);
        let phase = Complex64::new(0.0, cmp.delta_omega * t).exp();
        let mut row = vec![
            fmt17(tau * t),
            fmt17(t),
            fmt17(sa[0].norm_sqr()),
            fmt17(sb[0].norm_sqr()),
            fmt17(sa[0].re),
            fmt17((sb[0] * phase).re),
        ];
        if dim >= 2 {
            row.push(fmt17((sa[0].conj() * sa[1]).im));
            row.push(fmt17((sb[0].conj() * sb[1]).im));
        }
        rows.push(row.join(","));
    }
    output::write_csv_rows(path, &header, &rows)
}

pub fn run_compare(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let h = config.model.hamiltonian()?;
    let plan = plan_for(&h, config)?;
    let cmp = compare_pair(&h, config, &plan)?;
    let pairs = coherence_pairs(config, h.dim())?;

    let mut written = Vec::new();

    let path_a = out_path(config, &format!("{}.csv", cmp.run_a.label));
    output::write_trajectory_csv(&path_a, &cmp.run_a, &pairs)?;
    written.push(path_a);
    let path_b = out_path(config, &format!("{}.csv", cmp.run_b.label));
    output::write_trajectory_csv(&path_b, &cmp.run_b, &pairs)?;
    written.push(path_b);

    let scale = tau_scale(&h);
    let panels = out_path(config, "panels.csv");
    write_panels_csv(&panels, scale, &cmp)?;
    written.push(panels);

    let mut body = String::new();
    body.push_str(&format!("model: {}\n", config.model.describe()));
    body.push_str(&format!("method_a: {}\n", cmp.run_a.label));
    body.push_str(&format!("method_b: {}\n", cmp.run_b.label));
    body.push_str(&format!("tau_scale: {}\n", fmt17(scale)));
    body.push_str(&format!("delta_omega: {}\n", fmt17(cmp.delta_omega)));
    body.push_str(&cmp.report.to_key_value_block());
    let report_path = out_path(config, "compare.txt");
    output::write_report(&report_path, &body)?;
    written.push(report_path);

    Ok(written)
}

pub fn run_sweep(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let Some(sweep) = &config.sweep else {
        return Err(CliError::Config(
            "sweep needs a [sweep] section (param, values) or --sweep-values".into(),
        ));
    };
    let ModelSpec::Dimer { epsilon, .. } = config.model else {
        return Err(CliError::Config(
            "sweep currently supports the dimer model only".into(),
        ));
    };
    if config.methods.len() != 2 {
        return Err(CliError::Config(format!(
            "sweep compares exactly two methods, got {}",
            config.methods.len()
        )));
    }

    let header = "k,v,rca_coupling_ratio,splitting_error,max_population_diff";
    let path = out_path(config, "sweep.csv");
    if sweep.values.is_empty() {
        output::write_csv_rows(&path, header, &[])?;
        return Ok(vec![path]);
    }

    let point_row = |value: f64| -> Result<String, CliError> {
        let (k, v) = match sweep.param.as_str() {
            "k" => (value, value / (2.0 * epsilon)),
            _ => (2.0 * epsilon * value, value),
        };
        let h = models::build_dimer(epsilon, v).map_err(CliError::config_from)?;
        let plan = plan_for(&h, config)?;
        let cmp = compare_pair(&h, config, &plan)?;
        let validity = classical_rca::rca_validity_ratio(&h).map_err(numeric)?;
        let spring_splitting = (epsilon * epsilon + 2.0 * k).sqrt() - epsilon;
        let splitting_error = spring_splitting - k / epsilon;
        Ok([
            fmt17(k),
            fmt17(v),
            fmt17(validity.coupling_ratio),
            fmt17(splitting_error),
            fmt17(cmp.report.max_population_diff),
        ]
        .join(","))
    };

    let n_points = sweep.values.len();
    let workers = config.workers.min(n_points).max(1);
    let results: Mutex<Vec<Option<Result<String, CliError>>>> =
        Mutex::new((0..n_points).map(|_| None).collect());
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= n_points {
                    break;
                }
                let row = point_row(sweep.values[idx]);
                if let Some(slot) = results.lock().expect("sweep results lock").get_mut(idx) {
                    *slot = Some(row);
                }
            });
        }
    });

    let mut rows = Vec::with_capacity(n_points);
    for slot in results.into_inner().expect("sweep results lock") {
        match slot.expect("every sweep point evaluated") {
            Ok(row) => rows.push(row),
            Err(err) => return Err(err),
        }
    }
    output::write_csv_rows(&path, header, &rows)?;
    Ok(vec![path])
}
