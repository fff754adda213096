//! C ABI over the oscmap library so other languages can bind to it.
//!
//! Conventions: handles are opaque pointers created and freed here; every
//! fallible call returns an [`OscmapStatus`] and writes results through out
//! pointers; buffers are caller-allocated with sizes obtained from the
//! accessor functions. The matching header (`include/oscmap.h`) is
//! generated by cbindgen at build time.

use std::ffi::c_char;

use num_complex::Complex64;

use oscmap::classical_exact;
use oscmap::classical_rca;
use oscmap::integrators::{self, ComplexTrajectory, IntegrationPlan};
use oscmap::models::{self, Hamiltonian};
use oscmap::quantum::{self, ComplexAmplitudeVector};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscmapStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments violate a precondition (bad dimension, bad parameter).
    InvalidArgument = 2,
    /// The operation hit a singular matrix.
    Singular = 3,
    /// The eigensolver did not converge (corrupted input).
    NoConvergence = 4,
    /// Unexpected internal failure.
    Internal = 5,
}

fn status_of(err: &oscmap::Error) -> OscmapStatus {
    use oscmap::Error::*;
    match err {
        Singular => OscmapStatus::Singular,
        NonConvergence { .. } => OscmapStatus::NoConvergence,
        DimensionMismatch { .. }
        | NotSquare
        | NonFinite
        | Asymmetric { .. }
        | NonPositiveDiagonal { .. }
        | CouplingTooStrong { .. }
        | NonPositiveParameter { .. }
        | RingTooSmall { .. }
        | NegativeDamping { .. }
        | InvalidPlan(_)
        | DampedSystem
        | GridMismatch
        | IndexOutOfRange { .. }
        | NotNormalized { .. } => OscmapStatus::InvalidArgument,
    }
}

/// Static, NUL-terminated name of a status code; never needs freeing.
#[no_mangle]
pub extern "C" fn oscmap_status_name(status: OscmapStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        OscmapStatus::Ok => b"ok\0",
        OscmapStatus::NullPointer => b"null pointer\0",
        OscmapStatus::InvalidArgument => b"invalid argument\0",
        OscmapStatus::Singular => b"singular matrix\0",
        OscmapStatus::NoConvergence => b"no convergence\0",
        OscmapStatus::Internal => b"internal error\0",
    };
    name.as_ptr() as *const c_char
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn oscmap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque validated Hamiltonian handle.
pub struct OscmapHamiltonian {
    inner: Hamiltonian,
}

/// Opaque trajectory handle: complex amplitudes on a snapped time grid.
pub struct OscmapTrajectory {
    inner: ComplexTrajectory,
}

/// Propagation method selector for [`oscmap_evolve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscmapMethod {
    /// Exact spectral propagation of the quantum amplitudes.
    QuantumSpectral = 0,
    /// Fixed-step RK4 on the quantum equations.
    QuantumOde = 1,
    /// Position/momentum-coupled oscillators integrated with RK4.
    ClassicalExact = 2,
    /// Bare position-coupled oscillators (weak-coupling approximation).
    ClassicalRca = 3,
    /// Spring-form position-coupled oscillators.
    ClassicalRcaSpring = 4,
}

fn hamiltonian_out(
    result: Result<Hamiltonian, oscmap::Error>,
    out: *mut *mut OscmapHamiltonian,
) -> OscmapStatus {
    if out.is_null() {
        return OscmapStatus::NullPointer;
    }
    match result {
        Ok(h) => {
            let handle = Box::into_raw(Box::new(OscmapHamiltonian { inner: h }));
            unsafe { *out = handle };
            OscmapStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Build the two-site Hamiltonian `[[ε, V], [V, ε]]`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn oscmap_hamiltonian_dimer(
    epsilon: f64,
    v: f64,
    out: *mut *mut OscmapHamiltonian,
) -> OscmapStatus {
    hamiltonian_out(models::build_dimer(epsilon, v), out)
}

/// Build the N-site ring Hamiltonian with nearest-neighbour coupling.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn oscmap_hamiltonian_ring(
    sites: usize,
    epsilon: f64,
    v: f64,
    out: *mut *mut OscmapHamiltonian,
) -> OscmapStatus {
    hamiltonian_out(models::build_ring(sites, epsilon, v), out)
}

/// Build a Hamiltonian from a dense row-major `dim × dim` array.
///
/// # Safety
/// `entries` must point to `dim * dim` readable doubles; `out` must be a
/// valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn oscmap_hamiltonian_dense(
    dim: usize,
    entries: *const f64,
    out: *mut *mut OscmapHamiltonian,
) -> OscmapStatus {
    if entries.is_null() {
        return OscmapStatus::NullPointer;
    }
    if dim == 0 {
        return OscmapStatus::InvalidArgument;
    }
    let flat = unsafe { std::slice::from_raw_parts(entries, dim * dim) };
    let rows: Vec<Vec<f64>> = flat.chunks(dim).map(<[f64]>::to_vec).collect();
    hamiltonian_out(Hamiltonian::from_dense(&rows), out)
}

/// Free a Hamiltonian handle; null is ignored.
///
/// # Safety
/// `h` must be a handle from one of the constructors, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oscmap_hamiltonian_free(h: *mut OscmapHamiltonian) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Number of sites; 0 for a null handle.
///
/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oscmap_hamiltonian_dim(h: *const OscmapHamiltonian) -> usize {
    match unsafe { h.as_ref() } {
        Some(h) => h.inner.dim(),
        None => 0,
    }
}

/// Eigenvalues, ascending, written to a caller buffer of length `dim`.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `oscmap_hamiltonian_dim(h)`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn oscmap_eigenvalues(
    h: *const OscmapHamiltonian,
    out: *mut f64,
) -> OscmapStatus {
    let Some(h) = (unsafe { h.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if out.is_null() {
        return OscmapStatus::NullPointer;
    }
    match h.inner.spectrum() {
        Ok(dec) => {
            let slice = unsafe { std::slice::from_raw_parts_mut(out, h.inner.dim()) };
            slice.copy_from_slice(dec.eigenvalues());
            OscmapStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// The weak-coupling validity ratio max|V| / ω̄.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscmap_rca_coupling_ratio(
    h: *const OscmapHamiltonian,
    out: *mut f64,
) -> OscmapStatus {
    let Some(h) = (unsafe { h.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if out.is_null() {
        return OscmapStatus::NullPointer;
    }
    match classical_rca::rca_validity_ratio(&h.inner) {
        Ok(report) => {
            unsafe { *out = report.coupling_ratio };
            OscmapStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Propagate an initial amplitude vector with the chosen method over
/// `samples` evenly spaced outputs on `[0, t_end]`, stepping with `dt`
/// (pass `dt <= 0` to pick a step automatically). Returns a trajectory
/// handle through `out`.
///
/// # Safety
/// `re0` and `im0` must each hold `dim` readable doubles; `out` must be a
/// valid pointer to a handle slot; `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn oscmap_evolve(
    h: *const OscmapHamiltonian,
    method: OscmapMethod,
    re0: *const f64,
    im0: *const f64,
    dt: f64,
    t_end: f64,
    samples: usize,
    out: *mut *mut OscmapTrajectory,
) -> OscmapStatus {
    let Some(h) = (unsafe { h.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if re0.is_null() || im0.is_null() || out.is_null() {
        return OscmapStatus::NullPointer;
    }
    if !(t_end > 0.0) || samples < 2 {
        return OscmapStatus::InvalidArgument;
    }
    let dim = h.inner.dim();
    let re = unsafe { std::slice::from_raw_parts(re0, dim) };
    let im = unsafe { std::slice::from_raw_parts(im0, dim) };
    let values: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    let c0 = match ComplexAmplitudeVector::new(values) {
        Ok(c0) => c0,
        Err(err) => return status_of(&err),
    };

    let result = evolve_impl(&h.inner, method, &c0, dt, t_end, samples);
    match result {
        Ok(traj) => {
            let handle = Box::into_raw(Box::new(OscmapTrajectory { inner: traj }));
            unsafe { *out = handle };
            OscmapStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

fn evolve_impl(
    h: &Hamiltonian,
    method: OscmapMethod,
    c0: &ComplexAmplitudeVector,
    dt: f64,
    t_end: f64,
    samples: usize,
) -> Result<ComplexTrajectory, oscmap::Error> {
    let dec = h.spectrum()?;
    let max_freq = dec.eigenvalues().iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let dt = if dt > 0.0 {
        dt
    } else {
        integrators::suggested_dt(max_freq.max(f64::MIN_POSITIVE))
    };
    let plan = IntegrationPlan::uniform(dt, t_end, samples)?;
    match method {
        OscmapMethod::QuantumSpectral => quantum::propagate_spectral(h, c0, &plan.sample_times()),
        OscmapMethod::QuantumOde => quantum::propagate_ode(h, c0, &plan),
        OscmapMethod::ClassicalExact => classical_exact::exact_classical_evolve(h, c0, &plan),
        OscmapMethod::ClassicalRca | OscmapMethod::ClassicalRcaSpring => {
            let sys = match method {
                OscmapMethod::ClassicalRca => classical_rca::build_q_coupled(h)?,
                _ => classical_rca::build_q_coupled_spring(h)?,
            };
            let (q0, v0) = sys.initial_state(c0)?;
            let traj = integrators::verlet_second_order(sys.system(), &q0, &v0, &plan)?;
            classical_rca::rca_trajectory_amplitudes(&sys, &traj)
        }
    }
}

/// Number of samples in a trajectory; 0 for null.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_len(t: *const OscmapTrajectory) -> usize {
    match unsafe { t.as_ref() } {
        Some(t) => t.inner.len(),
        None => 0,
    }
}

/// Number of sites per sample; 0 for null.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_dim(t: *const OscmapTrajectory) -> usize {
    match unsafe { t.as_ref() } {
        Some(t) => t.inner.dim(),
        None => 0,
    }
}

/// Copy the sample times into a caller buffer of length
/// `oscmap_trajectory_len(t)`.
///
/// # Safety
/// `t` must be a live handle; `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_times(
    t: *const OscmapTrajectory,
    out: *mut f64,
) -> OscmapStatus {
    let Some(t) = (unsafe { t.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if out.is_null() {
        return OscmapStatus::NullPointer;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(out, t.inner.len()) };
    slice.copy_from_slice(t.inner.times());
    OscmapStatus::Ok
}

/// Copy amplitudes into caller buffers of length `len * dim`, row-major in
/// the sample index.
///
/// # Safety
/// `t` must be a live handle; `out_re` and `out_im` must each hold
/// `len * dim` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_amplitudes(
    t: *const OscmapTrajectory,
    out_re: *mut f64,
    out_im: *mut f64,
) -> OscmapStatus {
    let Some(t) = (unsafe { t.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if out_re.is_null() || out_im.is_null() {
        return OscmapStatus::NullPointer;
    }
    let total = t.inner.len() * t.inner.dim();
    let re = unsafe { std::slice::from_raw_parts_mut(out_re, total) };
    let im = unsafe { std::slice::from_raw_parts_mut(out_im, total) };
    let dim = t.inner.dim();
    for (i, state) in t.inner.states().iter().enumerate() {
        for (n, z) in state.iter().enumerate() {
            re[i * dim + n] = z.re;
            im[i * dim + n] = z.im;
        }
    }
    OscmapStatus::Ok
}

/// Copy site populations |z|² into a caller buffer of length `len * dim`.
///
/// # Safety
/// `t` must be a live handle; `out` must hold `len * dim` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_populations(
    t: *const OscmapTrajectory,
    out: *mut f64,
) -> OscmapStatus {
    let Some(t) = (unsafe { t.as_ref() }) else {
        return OscmapStatus::NullPointer;
    };
    if out.is_null() {
        return OscmapStatus::NullPointer;
    }
    let dim = t.inner.dim();
    let slice = unsafe { std::slice::from_raw_parts_mut(out, t.inner.len() * dim) };
    for (i, state) in t.inner.states().iter().enumerate() {
        for (n, z) in state.iter().enumerate() {
            slice[i * dim + n] = z.norm_sqr();
        }
    }
    OscmapStatus::Ok
}

/// Free a trajectory handle; null is ignored.
///
/// # Safety
/// `t` must be a handle from [`oscmap_evolve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oscmap_trajectory_free(t: *mut OscmapTrajectory) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}
