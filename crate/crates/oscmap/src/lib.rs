//! Map an N-level quantum system with real couplings onto classical coupled
//! oscillators, propagate both descriptions, and compare them.
//!
//! The crate provides three views of the same linear dynamics (units ħ = 1,
//! all energies are angular frequencies):
//!
//! * the quantum amplitudes `c_n(t)` solving `i ċ = H c`, propagated either
//!   spectrally or by fixed-step integration ([`quantum`]);
//! * the exactly equivalent classical system whose positions and momenta are
//!   coupled with equal strength, so that `z_n = (q_n + i p_n)/√2`
//!   reproduces `c_n(t)` to integrator accuracy ([`classical_exact`]);
//! * the simpler position-coupled oscillators that agree with the quantum
//!   system in the realistic-coupling approximation, where every coupling is
//!   small against the natural frequencies ([`classical_rca`]).
//!
//! [`models`] builds the stock Hamiltonians (dimer, ring, tuned pendulum
//! pair, coupled LC circuits), [`analysis`] computes observables and
//! deviation metrics, and the `oscmap` binary exposes everything as
//! `spectrum`, `evolve`, `compare` and `sweep` subcommands writing CSV and
//! key-value report files.

pub mod analysis;
pub mod classical_exact;
pub mod classical_rca;
pub mod cli;
pub mod error;
pub mod integrators;
pub mod linalg;
pub mod models;
pub mod quantum;

pub use error::{Error, Result};
