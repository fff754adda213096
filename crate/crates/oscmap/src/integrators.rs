//! Fixed-step integrators for the two linear systems the crate propagates:
//! the first-order complex system `i ċ = H c` and the second-order real
//! system `q̈ = -S q - D q̇`.
//!
//! Everything here is deterministic: the step is fixed, requested sample
//! times are snapped to whole steps up front, and reported times are exact
//! multiples of `dt`. Damped systems are integrated with RK4; the Verlet
//! path refuses them because velocity forces break its splitting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, RealSymmetricMatrix};

/// Proposed step for a system whose fastest angular frequency is
/// `max_frequency`: one thousandth of the shortest period.
pub fn suggested_dt(max_frequency: f64) -> f64 {
    assert!(max_frequency > 0.0, "need a positive frequency scale");
    (2.0 * std::f64::consts::PI / max_frequency) / 1000.0
}

/// A fixed step size together with the step indices at which output is
/// wanted. Requested times are snapped to the nearest whole step; the
/// snapped times are what every trajectory and output file reports.
#[derive(Debug, Clone)]
pub struct IntegrationPlan {
    dt: f64,
    t_end: f64,
    sample_steps: Vec<u64>,
}

impl IntegrationPlan {
    /// Snap `sample_times` onto the `dt` grid. Times must land strictly
    /// increasing after snapping and inside `[0, t_end]`.
    pub fn new(dt: f64, t_end: f64, sample_times: &[f64]) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidPlan(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }
        if !(t_end >= 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidPlan(format!(
                "t_end must be non-negative, got {t_end}"
            )));
        }
        if sample_times.is_empty() {
            return Err(Error::InvalidPlan("no sample times requested".into()));
        }
        let max_step = (t_end / dt).round() as u64;
        let mut sample_steps = Vec::with_capacity(sample_times.len());
        for &t in sample_times {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidPlan(format!("sample time {t} invalid")));
            }
            let step = (t / dt).round() as u64;
            if step > max_step {
                return Err(Error::InvalidPlan(format!(
                    "sample time {t} snaps past t_end = {t_end}"
                )));
            }
            if let Some(&prev) = sample_steps.last() {
                if step <= prev {
                    return Err(Error::InvalidPlan(format!(
                        "sample times not strictly increasing after snapping to dt = {dt} \
                         (step {step} follows {prev}); use fewer samples or a smaller dt"
                    )));
                }
            }
            sample_steps.push(step);
        }
        Ok(Self {
            dt,
            t_end,
            sample_steps,
        })
    }

    /// `count` samples evenly spaced over `[0, t_end]`, endpoints included.
    pub fn uniform(dt: f64, t_end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidPlan(format!(
                "need at least 2 samples, got {count}"
            )));
        }
        let times: Vec<f64> = (0..count)
            .map(|i| t_end * i as f64 / (count - 1) as f64)
            .collect();
        Self::new(dt, t_end, &times)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn sample_steps(&self) -> &[u64] {
        &self.sample_steps
    }

    /// The snapped sample times, each an exact multiple of `dt`.
    pub fn sample_times(&self) -> Vec<f64> {
        self.sample_steps
            .iter()
            .map(|&s| s as f64 * self.dt)
            .collect()
    }

    fn last_step(&self) -> u64 {
        *self.sample_steps.last().expect("plan has samples")
    }
}

/// The linear second-order system `q̈ = -S q - D q̇` with a symmetric
/// stiffness matrix and diagonal, non-negative damping `D_n = 2 Γ_n`.
///
/// `natural_frequencies` carries the per-site ω_n of the oscillators the
/// system was built from; amplitude reconstruction needs them, the
/// integrators do not.
#[derive(Debug, Clone)]
pub struct SecondOrderSystem {
    stiffness: RealSymmetricMatrix,
    damping: Vec<f64>,
    natural_frequencies: Vec<f64>,
    min_stiffness_eigenvalue: f64,
    max_stiffness_eigenvalue: f64,
}

impl SecondOrderSystem {
    pub fn new(
        stiffness: RealSymmetricMatrix,
        damping: Vec<f64>,
        natural_frequencies: Vec<f64>,
    ) -> Result<Self> {
        let n = stiffness.dim();
        if damping.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: damping.len(),
            });
        }
        if natural_frequencies.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: natural_frequencies.len(),
            });
        }
        for (index, &value) in damping.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeDamping { index, value });
            }
        }
        let eigs = linalg::eig_sym(&stiffness)?;
        let (min_ev, max_ev) = match eigs.eigenvalues() {
            [] => (0.0, 0.0),
            evs => (evs[0], evs[evs.len() - 1]),
        };
        Ok(Self {
            stiffness,
            damping,
            natural_frequencies,
            min_stiffness_eigenvalue: min_ev,
            max_stiffness_eigenvalue: max_ev,
        })
    }

    pub fn undamped(stiffness: RealSymmetricMatrix, natural_frequencies: Vec<f64>) -> Result<Self> {
        let n = stiffness.dim();
        Self::new(stiffness, vec![0.0; n], natural_frequencies)
    }

    pub fn dim(&self) -> usize {
        self.stiffness.dim()
    }

    pub fn stiffness(&self) -> &RealSymmetricMatrix {
        &self.stiffness
    }

    pub fn damping(&self) -> &[f64] {
        &self.damping
    }

    pub fn natural_frequencies(&self) -> &[f64] {
        &self.natural_frequencies
    }

    pub fn is_damped(&self) -> bool {
        self.damping.iter().any(|&d| d > 0.0)
    }

    /// Whether the stiffness matrix is positive definite. An undamped
    /// physical oscillator system should be; callers are expected to warn
    /// when it is not, and the integrators proceed regardless.
    pub fn is_positive_definite(&self) -> bool {
        self.min_stiffness_eigenvalue > 0.0
    }

    /// Largest mode angular frequency √λ_max(S), the scale that picks `dt`.
    pub fn max_mode_frequency(&self) -> f64 {
        self.max_stiffness_eigenvalue.max(0.0).sqrt()
    }

    /// Mode angular frequencies √λ_k for positive-definite stiffness,
    /// ascending.
    pub fn mode_frequencies(&self) -> Result<Vec<f64>> {
        let dec = linalg::eig_sym(&self.stiffness)?;
        Ok(dec
            .eigenvalues()
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect())
    }

    /// `out = -S q - D v`.
    pub fn acceleration_into(&self, q: &[f64], v: &[f64], out: &mut [f64]) {
        self.stiffness.matvec_into(q, out);
        for i in 0..out.len() {
            out[i] = -out[i] - self.damping[i] * v[i];
        }
    }

    /// Oscillator energy ½ (vᵀv + qᵀ S q) of the undamped system.
    pub fn energy(&self, q: &[f64], v: &[f64]) -> f64 {
        0.5 * (v.iter().map(|x| x * x).sum::<f64>() + self.stiffness.quadratic_form(q))
    }
}

/// Samples of a complex state vector on a snapped time grid.
#[derive(Debug, Clone)]
pub struct ComplexTrajectory {
    times: Vec<f64>,
    states: Vec<Vec<Complex64>>,
}

impl ComplexTrajectory {
    pub fn new(times: Vec<f64>, states: Vec<Vec<Complex64>>) -> Self {
        debug_assert_eq!(times.len(), states.len());
        Self { times, states }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, i: usize) -> &[Complex64] {
        &self.states[i]
    }

    pub fn states(&self) -> &[Vec<Complex64>] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[Complex64])> {
        self.times
            .iter()
            .copied()
            .zip(self.states.iter().map(Vec::as_slice))
    }
}

/// Samples of positions and velocities on a snapped time grid.
#[derive(Debug, Clone)]
pub struct SecondOrderTrajectory {
    times: Vec<f64>,
    positions: Vec<Vec<f64>>,
    velocities: Vec<Vec<f64>>,
}

impl SecondOrderTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn dim(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i]
    }

    pub fn velocity(&self, i: usize) -> &[f64] {
        &self.velocities[i]
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Classical RK4 on `y' = f(y)` for an autonomous real system.
pub(crate) fn rk4_real_trajectory(
    deriv: impl Fn(&[f64], &mut [f64]),
    y0: &[f64],
    plan: &IntegrationPlan,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = y0.len();
    let dt = plan.dt();
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];

    let mut times = Vec::with_capacity(plan.sample_steps().len());
    let mut states = Vec::with_capacity(plan.sample_steps().len());
    let mut samples = plan.sample_steps().iter().peekable();
    let last = plan.last_step();

    for step in 0..=last {
        if samples.peek() == Some(&&step) {
            times.push(step as f64 * dt);
            states.push(y.clone());
            samples.next();
        }
        if step == last {
            break;
        }
        deriv(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        deriv(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        deriv(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + dt * k3[i];
        }
        deriv(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    (times, states)
}

/// Classical RK4 on `c' = f(c)` for an autonomous complex system.
pub(crate) fn rk4_complex_trajectory(
    deriv: impl Fn(&[Complex64], &mut [Complex64]),
    c0: &[Complex64],
    plan: &IntegrationPlan,
) -> ComplexTrajectory {
    let dim = c0.len();
    let dt = plan.dt();
    let mut c = c0.to_vec();
    let mut k1 = vec![Complex64::ZERO; dim];
    let mut k2 = vec![Complex64::ZERO; dim];
    let mut k3 = vec![Complex64::ZERO; dim];
    let mut k4 = vec![Complex64::ZERO; dim];
    let mut tmp = vec![Complex64::ZERO; dim];

    let mut times = Vec::with_capacity(plan.sample_steps().len());
    let mut states = Vec::with_capacity(plan.sample_steps().len());
    let mut samples = plan.sample_steps().iter().peekable();
    let last = plan.last_step();

    for step in 0..=last {
        if samples.peek() == Some(&&step) {
            times.push(step as f64 * dt);
            states.push(c.clone());
            samples.next();
        }
        if step == last {
            break;
        }
        deriv(&c, &mut k1);
        for i in 0..dim {
            tmp[i] = c[i] + 0.5 * dt * k1[i];
        }
        deriv(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = c[i] + 0.5 * dt * k2[i];
        }
        deriv(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = c[i] + dt * k3[i];
        }
        deriv(&tmp, &mut k4);
        for i in 0..dim {
            c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    ComplexTrajectory::new(times, states)
}

/// RK4 integration of `i ċ = H c` with real symmetric `H`.
pub fn rk4_linear_complex(
    h: &RealSymmetricMatrix,
    c0: &[Complex64],
    plan: &IntegrationPlan,
) -> Result<ComplexTrajectory> {
    check_dim(h.dim(), c0.len())?;
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(rk4_complex_trajectory(
        |c, out| {
            h.matvec_complex_into(c, out);
            for x in out.iter_mut() {
                *x *= minus_i;
            }
        },
        c0,
        plan,
    ))
}

/// Velocity-Verlet integration of the undamped system `q̈ = -S q`.
///
/// Symplectic: the oscillator energy stays in a band of width O(dt²) with
/// no secular growth. Damped systems are rejected; route them through
/// [`rk4_second_order`].
pub fn verlet_second_order(
    sys: &SecondOrderSystem,
    q0: &[f64],
    v0: &[f64],
    plan: &IntegrationPlan,
) -> Result<SecondOrderTrajectory> {
    if sys.is_damped() {
        return Err(Error::DampedSystem);
    }
    let n = sys.dim();
    check_dim(n, q0.len())?;
    check_dim(n, v0.len())?;

    let dt = plan.dt();
    let mut q = q0.to_vec();
    let mut v = v0.to_vec();
    let mut acc = vec![0.0; n];
    let mut acc_next = vec![0.0; n];
    sys.stiffness.matvec_into(&q, &mut acc);
    for a in acc.iter_mut() {
        *a = -*a;
    }

    let mut times = Vec::with_capacity(plan.sample_steps().len());
    let mut positions = Vec::with_capacity(plan.sample_steps().len());
    let mut velocities = Vec::with_capacity(plan.sample_steps().len());
    let mut samples = plan.sample_steps().iter().peekable();
    let last = plan.last_step();

    for step in 0..=last {
        if samples.peek() == Some(&&step) {
            times.push(step as f64 * dt);
            positions.push(q.clone());
            velocities.push(v.clone());
            samples.next();
        }
        if step == last {
            break;
        }
        for i in 0..n {
            q[i] += dt * v[i] + 0.5 * dt * dt * acc[i];
        }
        sys.stiffness.matvec_into(&q, &mut acc_next);
        for a in acc_next.iter_mut() {
            *a = -*a;
        }
        for i in 0..n {
            v[i] += 0.5 * dt * (acc[i] + acc_next[i]);
        }
        std::mem::swap(&mut acc, &mut acc_next);
    }

    Ok(SecondOrderTrajectory {
        times,
        positions,
        velocities,
    })
}

/// RK4 on the equivalent first-order system `(q, v)' = (v, -S q - D v)`.
/// Handles damping; use [`verlet_second_order`] for long undamped runs.
pub fn rk4_second_order(
    sys: &SecondOrderSystem,
    q0: &[f64],
    v0: &[f64],
    plan: &IntegrationPlan,
) -> Result<SecondOrderTrajectory> {
    let n = sys.dim();
    check_dim(n, q0.len())?;
    check_dim(n, v0.len())?;

    let mut y0 = q0.to_vec();
    y0.extend_from_slice(v0);
    let (times, states) = rk4_real_trajectory(
        |y, out| {
            let (q, v) = y.split_at(n);
            let (dq, dv) = out.split_at_mut(n);
            dq.copy_from_slice(v);
            sys.acceleration_into(q, v, dv);
        },
        &y0,
        plan,
    );
    let mut positions = Vec::with_capacity(states.len());
    let mut velocities = Vec::with_capacity(states.len());
    for y in states {
        positions.push(y[..n].to_vec());
        velocities.push(y[n..].to_vec());
    }
    Ok(SecondOrderTrajectory {
        times,
        positions,
        velocities,
    })
}
